#include "cli.hpp"

int main(int argc, char** argv) { return gcf::cli::run(argc, argv, std::cout, std::cerr); }
