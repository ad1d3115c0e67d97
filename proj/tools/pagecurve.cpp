#include <string>
#include <vector>

#include "pagecurve/cli.hpp"

int main(int argc, char** argv) {
  return pagecurve::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
