#include "aapa_cli.hpp"

int main(int argc, char** argv) { return aapa::cli::cli_main(argc, argv); }
