#include <iostream>

#include "cli_app.hpp"

int main(int argc, char** argv) {
  return dressed_modes::cli::dispatch(argc, argv, std::cout, std::cerr);
}
