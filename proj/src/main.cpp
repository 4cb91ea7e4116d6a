#include <atomic>
#include <csignal>
#include <iostream>

#include "sspanel/cli_run.hpp"

namespace {

std::atomic<bool> g_stop{false};

void request_stop(int) { g_stop.store(true); }

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, request_stop);
  std::signal(SIGTERM, request_stop);
  return sspanel::cli::run_cli(argc, argv, std::cout, std::cerr, &g_stop);
}
