#include "falconer/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return falconer::cli::dispatch(std::move(args));
}
