#include <cstdio>
int main() { std::puts("polyvem"); return 0; }
