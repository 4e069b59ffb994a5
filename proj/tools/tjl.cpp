#include "tjl/harness.hpp"

int main(int argc, char** argv) { return tjl::run(argc, argv); }
