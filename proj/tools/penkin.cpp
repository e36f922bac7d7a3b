#include "penkin/cli.hpp"

int main(int argc, char** argv) { return penkin::dispatch(argc, argv); }
