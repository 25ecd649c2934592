#include <iostream>

#include "qkdbudget_cli/app.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return qkdbudget::cli::run(argc, argv, std::cout, std::cerr);
}
