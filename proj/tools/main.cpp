#include <cstdio>

int main() {
    std::puts("ab13: command-line interface not wired up yet");
    return 2;
}
