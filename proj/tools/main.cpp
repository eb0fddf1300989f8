#include <cstdio>

int main()
{
    std::puts("splitkit: not wired up yet");
    return 0;
}
