#include <string>
#include <vector>

#include "ulelab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ulelab::cli::run_cli(args);
}
