#include "mlsched/cli.hpp"

int main(int argc, char** argv) { return mlsched::cli_dispatch(argc, argv); }
