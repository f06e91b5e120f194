#include "ipm/cli_io.hpp"

int main(int argc, char** argv) { return ipm::cli_main({argv + 1, argv + argc}); }
