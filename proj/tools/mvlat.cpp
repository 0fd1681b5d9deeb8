#include "mvlat/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mvlat::cli::run(args, std::cout, std::cerr);
}
