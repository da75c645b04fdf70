#include "smi/validation.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "smi/sigfig.hpp"

namespace smi {

std::string_view to_string(ExampleStatus s) noexcept {
    switch (s) {
        case ExampleStatus::Match: return "MATCH";
        case ExampleStatus::KnownDiscrepancy: return "KNOWN_REFERENCE_DISCREPANCY";
        case ExampleStatus::Fail: return "FAIL";
    }
    return "?";
}

std::size_t ValidationReport::count(ExampleStatus s) const {
    std::size_t n = 0;
    for (const auto& e : examples)
        if (e.status == s) ++n;
    return n;
}

bool ValidationReport::ok() const { return id_checksum_ok && count(ExampleStatus::Fail) == 0; }

std::uint64_t example_id_checksum(const std::vector<std::string>& ids) {
    std::uint64_t h = 14695981039346656037ULL;
    bool first = true;
    for (const auto& id : ids) {
        if (!first) {
            h ^= static_cast<unsigned char>(',');
            h *= 1099511628211ULL;
        }
        first = false;
        for (unsigned char c : id) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    }
    return h;
}

namespace {

// "WE1,WE2,WE3,WE4,A1,A2,A3,A4,B1,B2,B3,B4,B5"
constexpr std::uint64_t kExpectedChecksum = 0x37c4b334f680f320ULL;
constexpr double kExactTolerance = 1e-12;

struct IndividualCase {
    const char* id;
    const char* title;
    double sma;
    std::vector<std::pair<double, double>> contributors;
    double exact;
    const char* reference;
};

struct GroupCase {
    const char* id;
    const char* title;
    std::vector<std::array<double, 3>> members;
    double exact;
    const char* reference;
    const char* known_issue;  // non-null when the printed value contradicts its own inputs
};

const std::vector<IndividualCase>& individual_cases() {
    static const std::vector<IndividualCase> cases{
        {"WE1", "one other person", 0.7, {{.5, .5}}, 0.175, "0.18"},
        {"WE2", "positive and negative goal alignment", 0.7,
         {{.5, .5}, {.3, .7}, {.4, -.8}, {.7, -.3}, {0, -.9}}, -0.049, "-0.049"},
        {"A1", "two other people", 0.7, {{.5, .5}, {.3, .7}}, 0.322, "0.32"},
        {"A2", "five other people", 0.7, {{.5, .5}, {.3, .7}, {.4, .3}, {.7, .3}, {.5, .9}}, 0.868, "0.87"},
        {"A3", "five other people, low SMA", 0.3, {{.5, .5}, {.3, .7}, {.4, .3}, {.7, .3}, {.5, .9}}, 0.372, "0.37"},
        {"A4", "five other people, low SSI", 0.7, {{.1, .5}, {.2, .7}, {0, .3}, {.1, .3}, {.1, .9}}, 0.217, "0.22"},
    };
    return cases;
}

const std::vector<GroupCase>& group_cases() {
    static const std::vector<GroupCase> cases{
        {"WE3", "two group members", {{.7, .3, .5}, {.8, .8, .3}}, 0.1485, "0.15", nullptr},
        {"WE4", "positive and negative group goal alignment",
         {{.7, .3, .5}, {.8, .8, .3}, {.6, .2, -.8}, {.9, .7, .4}, {.5, .3, -.1}}, 0.0876, "0.088", nullptr},
        {"B1", "one group member", {{.7, .6, .5}}, 0.21, "0.11",
         "printed 0.11 but 0.7 x 0.6 x 0.5 = 0.21; 0.11 is the first WE3 member's product (GI=.3)"},
        {"B2", "five group members",
         {{.7, .6, .5}, {.8, .8, .3}, {.3, .2, .8}, {.9, .7, .4}, {.2, .5, .2}}, 0.1444, "0.14", nullptr},
        {"B3", "five members, high SMA",
         {{.8, .6, .5}, {.9, .8, .3}, {1, .2, .8}, {.8, .7, .4}, {.9, .5, .2}}, 0.186, "0.19", nullptr},
        {"B4", "five members, high SIGA",
         {{.7, .6, .9}, {.8, .8, .7}, {.3, .2, .8}, {.9, .7, .8}, {.2, .5, .9}}, 0.2936, "0.29", nullptr},
        {"B5", "five members, high GI",
         {{.7, .9, .5}, {.8, .9, .3}, {.3, .7, .8}, {.9, .8, .4}, {.2, .7, .2}}, 0.203, "0.20", nullptr},
    };
    return cases;
}

void judge(ExampleRecord& r, const char* known_issue) {
    r.presented = to_significant(r.computed, 2);
    const bool exact_ok = std::abs(r.computed - r.exact) <= kExactTolerance;
    if (exact_ok && r.presented == r.reference) {
        r.status = ExampleStatus::Match;
    } else if (exact_ok && known_issue) {
        r.status = ExampleStatus::KnownDiscrepancy;
        r.diagnostic = known_issue;
    } else {
        r.status = ExampleStatus::Fail;
        std::ostringstream os;
        os << "expected " << r.reference << " (exact " << r.exact << "), computed " << shortest(r.computed);
        r.diagnostic = os.str();
    }
}

}  // namespace

ValidationReport run_validation(const MetricFunctions& fns) {
    ValidationReport report;
    auto add_individual = [&](const IndividualCase& c) {
        IndividualContext ctx{SociallyMindedAbility(c.sma), {}};
        std::ostringstream in;
        in << "SMA=" << c.sma << "; (SSI,GA)=";
        for (auto [ssi, ga] : c.contributors) {
            ctx.contributors.push_back({SharedSocialIdentity(ssi), GoalAlignment(ga)});
            in << "(" << ssi << "," << ga << ")";
        }
        ExampleRecord r{c.id, c.title, in.str(), fns.individual(ctx), c.exact, c.reference, {}, ExampleStatus::Fail, {}};
        judge(r, nullptr);
        report.examples.push_back(std::move(r));
    };
    auto add_group = [&](const GroupCase& c) {
        std::vector<GroupMember> members;
        std::ostringstream in;
        in << "(SMA,GI,SIGA)=";
        for (const auto& m : c.members) {
            members.push_back({SociallyMindedAbility(m[0]), GroupIdentification(m[1]),
                               SalientIdentityGoalAlignment(m[2])});
            in << "(" << m[0] << "," << m[1] << "," << m[2] << ")";
        }
        ExampleRecord r{c.id, c.title, in.str(), fns.group(GroupContext(std::move(members))), c.exact, c.reference, {}, ExampleStatus::Fail, {}};
        judge(r, c.known_issue);
        report.examples.push_back(std::move(r));
    };

    const auto& ind = individual_cases();
    const auto& grp = group_cases();
    add_individual(ind[0]);
    add_individual(ind[1]);
    add_group(grp[0]);
    add_group(grp[1]);
    for (std::size_t i = 2; i < ind.size(); ++i) add_individual(ind[i]);
    for (std::size_t i = 2; i < grp.size(); ++i) add_group(grp[i]);

    std::vector<std::string> ids;
    for (const auto& e : report.examples) ids.push_back(e.id);
    report.id_checksum_ok = example_id_checksum(ids) == kExpectedChecksum;
    return report;
}

}  // namespace smi
