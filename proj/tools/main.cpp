#include "accelcoh/cli.hpp"

int main(int argc, char** argv) { return accelcoh::cli::run(argc, argv); }
