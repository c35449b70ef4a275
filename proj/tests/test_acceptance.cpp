#include "doctest.h"

#include <iostream>

#include "switchsim/acceptance.hpp"

TEST_CASE("acceptance suite passes every criterion") {
    const switchsim::AcceptanceReport report = switchsim::run_acceptance(nullptr);
    std::cout << report.render();
    for (const auto& check : report.checks) {
        INFO(check.name, ": ", check.detail);
        CHECK(check.pass);
    }
    CHECK(report.all_pass());
}
