#include "sentifolio/cli.hpp"

int main(int argc, char** argv) { return sentifolio::run_cli(argc, argv); }
