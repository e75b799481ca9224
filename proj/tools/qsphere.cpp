// CLI stub, filled in once the library modules are complete.
#include <cstdio>

int main() {
    std::puts("qsphere: not yet wired");
    return 2;
}
