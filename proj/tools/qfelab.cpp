#include <iostream>

#include "qfelab/cli/dispatch.hpp"

int main(int argc, char** argv) { return qfelab::cli::dispatch(argc, argv, std::cout, std::cerr); }
