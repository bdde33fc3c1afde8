#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "alsigns/classnum.hpp"

#include <memory>

int main(int argc, char **argv) {
  alsigns::install_hurwitz_table(std::make_shared<alsigns::HurwitzTable>(alsigns::hurwitz_sieve(2'000'000)));
  doctest::Context ctx;
  ctx.applyCommandLine(argc, argv);
  return ctx.run();
}
