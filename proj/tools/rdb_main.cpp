#include "rdb/cli.hpp"

int main(int argc, char** argv) { return rdb::cli_main(argc, argv); }
