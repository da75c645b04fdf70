#include "smi/metrics_table.hpp"

#include <cerrno>
#include <cstdlib>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "smi/error.hpp"
#include "smi/sigfig.hpp"

namespace smi {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    for (auto& c : cells) {
        const auto b = c.find_first_not_of(" \t");
        const auto e = c.find_last_not_of(" \t");
        c = b == std::string::npos ? "" : c.substr(b, e - b + 1);
    }
    return cells;
}

std::string where(std::size_t row, const std::string& column) {
    return "row " + std::to_string(row) + ", column " + column;
}

double number(const std::string& cell, std::size_t row, const std::string& column) {
    if (cell.empty()) throw Error(ErrorKind::Parse, where(row, column) + ": value required");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size() || errno != 0) {
        throw Error(ErrorKind::Parse, where(row, column) + ": '" + cell + "' is not a number");
    }
    return v;
}

template <typename T>
T bounded(double v, std::size_t row, const std::string& column) {
    try {
        return T(v);
    } catch (const Error& e) {
        throw Error(e.kind(), where(row, column) + ": " + e.detail());
    }
}

}  // namespace

std::vector<MetricRow> parse_metric_table(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "row 1: missing header");
    const auto header = split_csv(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "kind" || header[2] != "sma") {
        throw Error(ErrorKind::Parse, "row 1: header must start with id,kind,sma");
    }
    if ((header.size() - 3) % 3 != 0) throw Error(ErrorKind::Parse, "row 1: contributor columns must come in triplets");
    for (std::size_t c = 3; c < header.size(); c += 3) {
        const auto k = std::to_string((c - 3) / 3 + 1);
        if (header[c] != "sma_" + k || header[c + 1] != "so_" + k || header[c + 2] != "go_" + k) {
            throw Error(ErrorKind::Parse, "row 1, column " + std::to_string(c + 1) + ": expected sma_" + k + ",so_" +
                                              k + ",go_" + k);
        }
    }

    std::vector<MetricRow> rows;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = split_csv(line);
        if (cells.size() > header.size()) {
            throw Error(ErrorKind::Parse, where(row_no, std::to_string(header.size() + 1)) + ": more cells than header");
        }
        cells.resize(header.size());
        const std::string& kind = cells[1];

        std::size_t filled = 0;
        bool gap = false;
        for (std::size_t c = 3; c < header.size(); c += 3) {
            const bool blank = cells[c].empty() && cells[c + 1].empty() && cells[c + 2].empty();
            if (blank) {
                gap = true;
                continue;
            }
            if (gap) throw Error(ErrorKind::Parse, where(row_no, header[c]) + ": contributor after a blank triplet");
            ++filled;
        }

        if (kind == "individual") {
            IndividualContext ctx{bounded<SociallyMindedAbility>(number(cells[2], row_no, "sma"), row_no, "sma"), {}};
            for (std::size_t k = 0; k < filled; ++k) {
                const std::size_t c = 3 + 3 * k;
                if (!cells[c].empty()) {
                    throw Error(ErrorKind::Parse, where(row_no, header[c]) + ": must be blank for individual rows");
                }
                auto ssi = bounded<SharedSocialIdentity>(number(cells[c + 1], row_no, header[c + 1]), row_no, header[c + 1]);
                auto ga = bounded<GoalAlignment>(number(cells[c + 2], row_no, header[c + 2]), row_no, header[c + 2]);
                ctx.contributors.push_back({ssi, ga});
            }
            rows.push_back({cells[0], std::move(ctx)});
        } else if (kind == "group") {
            if (!cells[2].empty()) throw Error(ErrorKind::Parse, where(row_no, "sma") + ": must be blank for group rows");
            std::vector<GroupMember> members;
            for (std::size_t k = 0; k < filled; ++k) {
                const std::size_t c = 3 + 3 * k;
                auto sma = bounded<SociallyMindedAbility>(number(cells[c], row_no, header[c]), row_no, header[c]);
                auto gi = bounded<GroupIdentification>(number(cells[c + 1], row_no, header[c + 1]), row_no, header[c + 1]);
                auto siga = bounded<SalientIdentityGoalAlignment>(number(cells[c + 2], row_no, header[c + 2]), row_no,
                                                                  header[c + 2]);
                members.push_back({sma, gi, siga});
            }
            if (members.empty()) throw Error(ErrorKind::EmptyGroup, where(row_no, "sma_1") + ": group row has no members");
            rows.push_back({cells[0], GroupContext(std::move(members))});
        } else {
            throw Error(ErrorKind::Parse, where(row_no, "kind") + ": expected individual or group, got '" + kind + "'");
        }
    }
    return rows;
}

std::vector<MetricResult> compute_metric_table(const std::vector<MetricRow>& rows) {
    std::vector<MetricResult> out;
    for (const auto& r : rows) {
        if (const auto* ind = std::get_if<IndividualContext>(&r.context)) {
            out.push_back({r.id, "ISMI", ismi(*ind)});
        } else {
            out.push_back({r.id, "GSMI", gsmi(std::get<GroupContext>(r.context))});
        }
    }
    return out;
}

std::string format_metric_results(const std::vector<MetricResult>& results, OutputFormat format) {
    std::ostringstream os;
    switch (format) {
        case OutputFormat::Csv:
            os << "id,metric,value,sig2\n";
            for (const auto& r : results) os << r.id << ',' << r.kind << ',' << shortest(r.value) << ',' << to_significant(r.value) << '\n';
            break;
        case OutputFormat::JsonLines:
            for (const auto& r : results) {
                os << nlohmann::json{{"id", r.id}, {"metric", r.kind}, {"value", r.value}, {"sig2", to_significant(r.value)}}.dump()
                   << '\n';
            }
            break;
        case OutputFormat::Table:
            os << std::left << std::setw(16) << "id" << std::setw(6) << "metric" << std::setw(24) << "value"
               << "2 s.f.\n";
            for (const auto& r : results) {
                os << std::left << std::setw(16) << r.id << std::setw(6) << r.kind << std::setw(24) << shortest(r.value)
                   << to_significant(r.value) << '\n';
            }
            break;
    }
    return os.str();
}

}  // namespace smi
