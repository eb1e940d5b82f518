#include <cstdio>

int main() {
    std::puts("lutrev: command line interface not wired up yet");
    return 2;
}
