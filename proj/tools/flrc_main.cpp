#include "flr/cli.hpp"

int main(int argc, char** argv) {
  return flr::run(std::vector<std::string>(argv + 1, argv + argc));
}
