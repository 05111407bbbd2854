#include "swdae/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    const auto parsed = swdae::cli::parse_arguments(args, std::cout, std::cerr);
    if (parsed.exit_code)
        return *parsed.exit_code;
    return swdae::cli::run(parsed.config, std::cout, std::cerr);
}
