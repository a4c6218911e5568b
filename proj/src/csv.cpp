#include "subthz/csv.hpp"

#include <charconv>

namespace subthz {

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepResult>& results) {
    os << "config_id,waveform,scs_khz,modulation,rank,ptrs_scheme,snr_db,blocks,errors,bler\n";
    for (const auto& r : results) {
        const auto& c = r.config;
        for (const auto& p : r.points) {
            os << c.sweep.config_id << ',' << to_string(c.waveform) << ',' << format_number(c.scs_khz) << ','
               << to_string(c.modulation) << ',' << c.rank << ',' << to_string(c.ptrs.scheme) << ','
               << format_number(p.snr_db) << ',' << p.blocks << ',' << p.errors << ',' << format_number(p.bler())
               << '\n';
        }
    }
}

void write_summary_csv(std::ostream& os, const std::vector<SweepResult>& results) {
    os << "config_id,required_snr_db\n";
    for (const auto& r : results) {
        os << r.config.sweep.config_id << ',';
        if (r.required_snr_db) os << format_number(*r.required_snr_db);
        else os << "NA";
        os << '\n';
    }
}

}  // namespace subthz
