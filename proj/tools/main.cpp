#include "cli.hpp"

int main(int argc, char** argv) {
  return dpstts::cli::run_cli(argc, argv);
}
