#include <vector>

#include "nlslab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nlslab::cli::run(std::move(args));
}
