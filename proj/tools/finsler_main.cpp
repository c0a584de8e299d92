#include <string>
#include <vector>

#include "cli/cli_core.hpp"
#include "finsler/parallel.hpp"

int main(int argc, char** argv) {
    finsler::exec::apply_thread_cap();
    std::vector<std::string> args(argv + 1, argv + argc);
    return finsler::cli::run(args);
}
