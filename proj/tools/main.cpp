#include <sponge/cli.hpp>

#include <iostream>

int main(int argc, char** argv) {
    const auto result = sponge::run_command_line(argc, argv);
    std::cout << result.out << std::flush;
    std::cerr << result.err << std::flush;
    return result.exit_code;
}
