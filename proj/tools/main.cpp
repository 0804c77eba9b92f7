#include "jenga/cli.hpp"

int main(int argc, char** argv) {
    return jenga::cli::run(argc, argv);
}
