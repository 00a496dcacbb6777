#include <vector>

#include "bhc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bhc::cli::run(args);
}
