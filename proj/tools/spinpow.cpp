#include <vector>

#include "spinpow/cli.hpp"

int main(int argc, char** argv) {
    return spinpow::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
