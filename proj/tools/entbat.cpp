#include "entbat_cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return entbat::cli::run(args, std::cout, std::cerr);
}
