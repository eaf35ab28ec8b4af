// placeholder; replaced by the full CLI
#include <cstdio>
int main() { std::puts("wbi"); return 0; }
