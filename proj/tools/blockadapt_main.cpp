#include "blockadapt/cli.hpp"

int main(int argc, char** argv) { return blockadapt::dispatch(argc, argv); }
