#include "fhsc/cli_app.hpp"

int main(int argc, char** argv) { return fhsc::cli::run_main(argc, argv); }
