#include <iostream>

#include "layoutminer/cli/dispatch.hpp"

int main(int argc, char** argv) { return layoutminer::dispatch(argc, argv, std::cout, std::cerr); }
