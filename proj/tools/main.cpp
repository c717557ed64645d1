#include <string>
#include <vector>

#include "fundalloc/cli.hpp"

int main(int argc, char** argv) {
    return fundalloc::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
