// SPDX-License-Identifier: Apache-2.0
#include "qubo/cli.hpp"

int main(int argc, char** argv) { return qubo::run_cli(argc, argv); }
