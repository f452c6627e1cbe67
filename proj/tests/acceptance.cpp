// Acceptance gate: runs the full verification gauntlet and prints one
// pass/fail line per criterion.  A criterion passes when every one of its
// checks passes and the combined time stays inside the pinned budget;
// deadline-capped checks are reported as skipped rather than failed.

#include <latbound/verify.hpp>

#include <cstdio>
#include <map>
#include <vector>

int main() {
    using namespace latbound;

    VerifyOptions opts;
    std::vector<VerificationRecord> records = run_verification(opts);

    std::map<int, std::vector<const VerificationRecord*>> by_criterion;
    for (const VerificationRecord& r : records) by_criterion[r.criterion].push_back(&r);

    bool all_ok = true;
    for (int crit = 1; crit <= 10; ++crit) {
        const auto& group = by_criterion[crit];
        long long budget = criterion_budget_ms(crit);
        long long elapsed = 0;
        int skipped = 0;
        std::vector<const VerificationRecord*> failures;
        for (const VerificationRecord* r : group) {
            elapsed += r->ms;
            if (r->status == VerifyStatus::Fail) failures.push_back(r);
            if (r->status == VerifyStatus::SkippedCap) ++skipped;
        }
        bool ok = !group.empty() && failures.empty() && elapsed <= budget;
        if (!ok) all_ok = false;
        std::printf("criterion %2d: %s  (%zu checks, %lld ms, budget %lld ms)%s\n", crit,
                    ok ? "PASS" : "FAIL", group.size(), elapsed, budget,
                    skipped ? "  [deadline skip]" : "");
        for (const VerificationRecord* r : failures)
            std::printf("    %s: expected %s, observed %s\n", r->case_name.c_str(),
                        r->expected.c_str(), r->observed.c_str());
        if (!group.empty() && failures.empty() && elapsed > budget)
            std::printf("    over budget by %lld ms\n", elapsed - budget);
    }

    std::printf("acceptance: %s\n", all_ok ? "PASS" : "FAIL");
    return all_ok ? 0 : 1;
}
