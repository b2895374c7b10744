#include <string>
#include <vector>

#include "ncconvex/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return ncconvex::cli::run(args).exit_code;
}
