#include "holgeo/version.hpp"
#include <cstdio>
int main() { std::printf("%s\n", holgeo::version_string); return 0; }
