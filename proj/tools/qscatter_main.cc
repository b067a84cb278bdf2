#include "qscatter/cli/commands.h"

int main(int argc, char **argv) {
    return qscatter::cli::main_cli(argc, argv);
}
