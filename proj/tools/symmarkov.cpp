#include <string>
#include <vector>

#include "symmarkov/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return symmarkov::cli::run(args);
}
