#include "ffnt/cli.hpp"

int main(int argc, char** argv) { return ffnt::run(argc, argv); }
