#include "symstat/cli.hpp"

int main(int argc, char** argv) {
    return symstat::cli::main(argc, argv);
}
