#include "app.hpp"

int main(int argc, char** argv) { return probe::main(argc, argv); }
