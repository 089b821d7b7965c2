#include "adacover/cli.hpp"

int main(int argc, char** argv) { return adacover::cli::dispatch(argc, argv); }
