#ifndef SRL_REGULARITY_VERIFY_HH
#define SRL_REGULARITY_VERIFY_HH

#include <srl/regularity/pipeline.hh>

#include <string>
#include <vector>

namespace srl
{
    struct Verdict
    {
        bool pass = true;
        std::vector<std::string> violations;
        std::vector<std::string> checks;       // what was checked, in order
    };

    // Rechecks a report against the original structure from scratch:
    // partition shape, indivisibility, per-cell defects against
    // arity * eps * prod |p_i|, the recorded defect table, the quotient, the
    // partition-size bound and the excellence of every core. Almost-stable
    // reports are checked cell-wise against their cleaned structure and
    // globally against m.
    auto verify_report(const Structure & m, const RegularityReport & r) -> Verdict;
}

#endif
