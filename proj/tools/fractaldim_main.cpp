#include <vector>

#include "fractaldim/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fractaldim::run_cli(args);
}
