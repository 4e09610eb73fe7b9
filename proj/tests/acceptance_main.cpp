// placeholder; the acceptance suite lands after the modules are proven out
#include <cstdio>

int main() {
    std::puts("acceptance suite not yet wired");
    return 1;
}
