#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "aclab/kernels.hpp"

int main(int argc, char** argv) {
    aclab::threads::configure_from_env();
    doctest::Context ctx;
    ctx.applyCommandLine(argc, argv);
    return ctx.run();
}
