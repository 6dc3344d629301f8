#include <vector>

#include "hapto/cli.hpp"

int main(int argc, char** argv) {
  return hapto::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
