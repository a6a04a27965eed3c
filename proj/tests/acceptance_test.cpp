// Acceptance gate: one PASS/FAIL line per criterion on stdout, timings on stderr.
//
//   acceptance_test                 criteria 1..10, then 11 (two full runs compared)
//   acceptance_test --only 4        a single criterion (11 runs the full suite twice)
//   acceptance_test --out DIR       where the run files for criterion 11 are written

#include <cstdio>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "acceptance.hpp"

namespace acc = quasispec::acceptance;

int main(int argc, char** argv) {
    std::vector<int> only;
    std::filesystem::path out_dir = std::filesystem::temp_directory_path() / "quasispec_acceptance";
    acc::Config cfg;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--only" && i + 1 < argc) only.push_back(std::atoi(argv[++i]));
        else if (a == "--out" && i + 1 < argc) out_dir = argv[++i];
        else {
            std::cerr << "usage: acceptance_test [--only N]... [--out DIR]\n";
            return 2;
        }
    }

    bool ok = true;
    auto report = [&](const acc::Outcome& o) {
        std::cout << acc::outcome_line(o) << std::endl;
        std::fprintf(stderr, "  criterion %d took %.2f s\n", o.id, o.seconds);
        ok = ok && o.pass;
    };

    const bool want_determinism = only.empty() || std::find(only.begin(), only.end(), acc::kDeterminismId) != only.end();
    if (want_determinism) {
        std::vector<acc::Outcome> first;
        const auto det = acc::run_determinism(cfg, out_dir, first);
        if (only.empty())
            for (const auto& o : first) report(o);
        report(det);
    } else {
        std::string data;
        for (const auto& o : acc::run_suite(cfg, only, data)) report(o);
        std::filesystem::create_directories(out_dir);
        acc::write_file(out_dir / "data.csv", data);
    }
    return ok ? 0 : 1;
}
