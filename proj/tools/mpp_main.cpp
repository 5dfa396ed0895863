#include "mpp/cli.hpp"

int main(int argc, char** argv) { return mpp::run_cli(argc, argv); }
