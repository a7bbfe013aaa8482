// Runs criteria A1-A12 at full size and prints one line per criterion.
#include <cstdio>

#include "steerkit/acceptance.hpp"

int main() {
    auto report = steerkit::run_acceptance();
    std::fputs(steerkit::format_report(report).c_str(), stdout);
    return report.all_pass() ? 0 : 1;
}
