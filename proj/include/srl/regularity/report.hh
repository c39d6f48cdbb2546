#ifndef SRL_REGULARITY_REPORT_HH
#define SRL_REGULARITY_REPORT_HH

#include <srl/regularity/pipeline.hh>

#include <string>

namespace srl
{
    // Human-readable report with sections PARAMS, PARTITION, QUOTIENT,
    // DEFECTS, CERTIFICATION and NOTES.
    auto format_report(const RegularityReport & r) -> std::string;

    // key=value lines, one per field; sets are space-separated element lists.
    auto format_report_kv(const RegularityReport & r) -> std::string;

    // Writes report.txt, report.kv, modified.rst, quotient.rst and, for the
    // almost-stable variant, cleaned.rst into dir (created if missing).
    void write_report(const std::string & dir, const RegularityReport & r);

    // Reads back what the verifier needs: mode, epsilon values, g, tauhat,
    // seed, partition, cores, modified structure, and the almost-stable
    // fields. Params conditions are not restored.
    auto read_report(const std::string & dir) -> RegularityReport;
}

#endif
