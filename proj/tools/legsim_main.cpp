#include <string>
#include <vector>

#include "legsim/cli.hpp"

int main(int argc, char** argv) {
  return legsim::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
