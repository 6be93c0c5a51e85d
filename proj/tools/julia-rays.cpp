#include "julia_rays/cli.hpp"

int main(int argc, char** argv) { return julia_rays::run_cli(argc, argv); }
