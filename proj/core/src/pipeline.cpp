#include "bincast/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bincast {

using nlohmann::json;

namespace {

constexpr const char* kSupportedIds =
    "supported representation ids: ms, grb(B[,kind]), lab(B[,kind]), pit(B), "
    "hyb(member,member,...)";

std::vector<std::string> split_top_level(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

std::string strip(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

ReprSpec parse_base(const std::string& name, const std::string& args, const std::string& full) {
    ReprSpec spec;
    if (name == "grb") spec.kind = ReprKind::GlobalBin;
    else if (name == "lab") spec.kind = ReprKind::LocalBin;
    else if (name == "pit") spec.kind = ReprKind::Pit;
    else {
        throw std::invalid_argument("unknown representation '" + full + "'; " + kSupportedIds);
    }
    if (!args.empty()) {
        auto parts = split_top_level(args);
        if (parts.empty() || parts.size() > 2) {
            throw std::invalid_argument("bad arguments in representation '" + full + "'; " +
                                        kSupportedIds);
        }
        // "binNNN" is accepted as an alias for the bare bin count
        std::string count = strip(parts[0]);
        if (count.rfind("bin", 0) == 0) count = count.substr(3);
        try {
            spec.bins = std::stoi(count);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad bin count in representation '" + full + "'; " +
                                        kSupportedIds);
        }
        if (spec.bins < 2) {
            throw std::invalid_argument("representation '" + full + "' needs at least 2 bins");
        }
        if (parts.size() == 2) spec.bin_kind = parse_bin_kind(strip(parts[1]));
    }
    return spec;
}

json binning_to_json(const BinningSpec& spec) {
    return json{{"kind", to_string(spec.kind)},
                {"requested", spec.requested_bins},
                {"collapsed", spec.collapsed},
                {"edges", spec.edges},
                {"centers", spec.centers}};
}

BinningSpec binning_from_json(const json& j) {
    BinningSpec spec;
    spec.kind = parse_bin_kind(j.at("kind").get<std::string>());
    spec.requested_bins = j.at("requested").get<int>();
    spec.collapsed = j.at("collapsed").get<bool>();
    spec.edges = j.at("edges").get<std::vector<double>>();
    spec.centers = j.at("centers").get<std::vector<double>>();
    return spec;
}

}  // namespace

std::string ReprSpec::id() const {
    switch (kind) {
        case ReprKind::MeanScale: return "ms";
        case ReprKind::Pit: return "pit(" + std::to_string(bins) + ")";
        case ReprKind::GlobalBin:
        case ReprKind::LocalBin: {
            std::string name = kind == ReprKind::GlobalBin ? "grb" : "lab";
            std::string s = name + "(" + std::to_string(bins);
            if (bin_kind != BinKind::Quantile) s += "," + to_string(bin_kind);
            return s + ")";
        }
        case ReprKind::Hybrid: {
            std::string s = "hyb(";
            for (std::size_t i = 0; i < members.size(); ++i) {
                if (i) s += ",";
                s += members[i].id();
            }
            return s + ")";
        }
    }
    return "?";
}

ReprSpec parse_repr(const std::string& id) {
    const std::string s = strip(id);
    if (s == "ms") return ReprSpec{ReprKind::MeanScale};

    const auto open = s.find('(');
    std::string name = open == std::string::npos ? s : s.substr(0, open);
    std::string args;
    if (open != std::string::npos) {
        if (s.back() != ')') {
            throw std::invalid_argument("unbalanced parentheses in representation '" + id + "'");
        }
        args = s.substr(open + 1, s.size() - open - 2);
    }

    if (name == "hyb") {
        ReprSpec spec;
        spec.kind = ReprKind::Hybrid;
        for (const auto& raw : split_top_level(args)) {
            const std::string member = strip(raw);
            if (member.empty()) {
                throw std::invalid_argument("empty member in representation '" + id + "'");
            }
            if (std::all_of(member.begin(), member.end(),
                            [](unsigned char c) { return std::isdigit(c); })) {
                ReprSpec m;  // bare bin count means a global relative binning
                m.kind = ReprKind::GlobalBin;
                m.bins = std::stoi(member);
                spec.members.push_back(m);
            } else {
                ReprSpec m = parse_repr(member);
                if (m.kind == ReprKind::Hybrid) {
                    throw std::invalid_argument("nested hyb(...) is not supported in '" + id + "'");
                }
                spec.members.push_back(m);
            }
        }
        if (spec.members.size() < 2) {
            throw std::invalid_argument("hyb(...) needs at least 2 members in '" + id + "'");
        }
        return spec;
    }
    return parse_base(name, args, id);
}

double log_abs_det_affine_chain(std::span<const AffineScale> stages) {
    double total = 0.0;
    for (const auto& s : stages) total += std::log(1.0 / s.a);
    return total;
}

RepresentationPipeline::Member RepresentationPipeline::fit_member(
    const Panel& train, const ReprSpec& spec, const std::map<std::string, AffineScale>& scales) {
    Member m;
    m.spec = spec;
    switch (spec.kind) {
        case ReprKind::MeanScale:
            break;  // uses the shared per-series scales
        case ReprKind::Pit:
            for (const auto& s : train.series()) {
                m.cdfs.emplace(s.item_id, EmpiricalCdf{std::span<const double>{s.values}});
            }
            break;
        case ReprKind::GlobalBin: {
            std::vector<double> pooled;
            for (const auto& s : train.series()) {
                const auto& scale = scales.at(s.item_id);
                for (double v : s.values) pooled.push_back(scale.apply(v));
            }
            m.global_bins = fit_bins(pooled, spec.bins, spec.bin_kind);
            break;
        }
        case ReprKind::LocalBin:
            for (const auto& s : train.series()) {
                m.local_bins.emplace(s.item_id, fit_bins(s.values, spec.bins, spec.bin_kind));
            }
            break;
        case ReprKind::Hybrid:
            throw std::logic_error("hybrid member cannot be fitted directly");
    }
    return m;
}

RepresentationPipeline RepresentationPipeline::fit(const Panel& train, const ReprSpec& input,
                                                   const ReprSpec& output) {
    if (train.empty()) throw std::invalid_argument("fit_pipeline: empty panel");

    RepresentationPipeline p;
    p.input_spec_ = input;
    for (const auto& s : train.series()) {
        p.scales_.emplace(s.item_id, fit_mean_scale(s.values));
    }

    if (input.kind == ReprKind::Hybrid) {
        if (input.members.size() < 2) {
            throw std::invalid_argument("fit_pipeline: hybrid input needs at least 2 members");
        }
        for (const auto& member : input.members) {
            p.input_members_.push_back(fit_member(train, member, p.scales_));
        }
    } else {
        p.input_members_.push_back(fit_member(train, input, p.scales_));
    }

    // A hybrid output delegates to one designated member: the finest global
    // binning, else the finest local one. pit cannot parametrize an output.
    ReprSpec resolved_output = output;
    if (output.kind == ReprKind::Hybrid) {
        const ReprSpec* best = nullptr;
        for (const auto& m : output.members) {
            if (m.kind != ReprKind::GlobalBin) continue;
            if (!best || m.bins > best->bins) best = &m;
        }
        if (!best) {
            for (const auto& m : output.members) {
                if (m.kind != ReprKind::LocalBin) continue;
                if (!best || m.bins > best->bins) best = &m;
            }
        }
        if (!best) {
            throw std::invalid_argument(
                "hybrid output has no binned member to delegate to: " + output.id());
        }
        resolved_output = *best;
    }
    if (resolved_output.kind == ReprKind::Pit) {
        throw std::invalid_argument("pit is an input-only representation; " +
                                    std::string(kSupportedIds));
    }
    p.output_spec_ = resolved_output;
    p.output_member_ = fit_member(train, resolved_output, p.scales_);
    return p;
}

const AffineScale& RepresentationPipeline::scale(const std::string& item_id) const {
    const auto it = scales_.find(item_id);
    if (it == scales_.end()) {
        throw std::invalid_argument("series '" + item_id + "' was not seen at fit time");
    }
    return it->second;
}

MemberTokens RepresentationPipeline::member_tokens(const Member& m, const std::string& item_id,
                                                   std::span<const double> values) const {
    MemberTokens out;
    out.kind = m.spec.kind;
    switch (m.spec.kind) {
        case ReprKind::MeanScale: {
            const auto& sc = scale(item_id);
            out.reals.reserve(values.size());
            for (double v : values) out.reals.push_back(sc.apply(v));
            break;
        }
        case ReprKind::Pit: {
            const auto it = m.cdfs.find(item_id);
            if (it == m.cdfs.end()) {
                throw std::invalid_argument("series '" + item_id + "' was not seen at fit time");
            }
            out.vocab = m.spec.bins;
            out.reals.reserve(values.size());
            for (double v : values) out.reals.push_back(it->second.pit(v));
            break;
        }
        case ReprKind::GlobalBin: {
            const auto& sc = scale(item_id);
            out.vocab = m.global_bins->bins();
            out.ids.reserve(values.size());
            for (double v : values) out.ids.push_back(bin_index(*m.global_bins, sc.apply(v)));
            break;
        }
        case ReprKind::LocalBin: {
            const auto it = m.local_bins.find(item_id);
            if (it == m.local_bins.end()) {
                throw std::invalid_argument("series '" + item_id + "' was not seen at fit time");
            }
            out.vocab = it->second.bins();
            out.ids.reserve(values.size());
            for (double v : values) out.ids.push_back(bin_index(it->second, v));
            break;
        }
        case ReprKind::Hybrid:
            throw std::logic_error("hybrid member has no direct tokens");
    }
    return out;
}

std::vector<MemberTokens> RepresentationPipeline::transform_input(
    const std::string& item_id, std::span<const double> values) const {
    std::vector<MemberTokens> tokens;
    tokens.reserve(input_members_.size());
    for (const auto& m : input_members_) tokens.push_back(member_tokens(m, item_id, values));
    return tokens;
}

void RepresentationPipeline::append_value(const std::string& item_id, double z,
                                          std::vector<MemberTokens>& tokens) const {
    const double value[1] = {z};
    for (std::size_t i = 0; i < input_members_.size(); ++i) {
        MemberTokens t = member_tokens(input_members_[i], item_id, value);
        auto& dst = tokens[i];
        dst.ids.insert(dst.ids.end(), t.ids.begin(), t.ids.end());
        dst.reals.insert(dst.reals.end(), t.reals.begin(), t.reals.end());
    }
}

const BinningSpec& RepresentationPipeline::output_binning(const std::string& item_id) const {
    if (output_spec_.kind == ReprKind::GlobalBin) return *output_member_.global_bins;
    if (output_spec_.kind == ReprKind::LocalBin) {
        const auto it = output_member_.local_bins.find(item_id);
        if (it == output_member_.local_bins.end()) {
            throw std::invalid_argument("series '" + item_id + "' was not seen at fit time");
        }
        return it->second;
    }
    throw std::logic_error("output representation is not binned: " + output_spec_.id());
}

int RepresentationPipeline::output_vocab(const std::string& item_id) const {
    return output_binning(item_id).bins();
}

AffineScale RepresentationPipeline::output_unscale(const std::string& item_id) const {
    if (output_spec_.kind == ReprKind::GlobalBin) return scale(item_id);
    return AffineScale{};  // lab reconstructs in the original domain already
}

std::vector<int> RepresentationPipeline::output_targets(const std::string& item_id,
                                                        std::span<const double> values) const {
    const BinningSpec& bins = output_binning(item_id);
    const AffineScale sc =
        output_spec_.kind == ReprKind::GlobalBin ? scale(item_id) : AffineScale{};
    std::vector<int> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(bin_index(bins, sc.apply(v)));
    return out;
}

double RepresentationPipeline::invert_output_bucket(const std::string& item_id, int bucket) const {
    const double center = reconstruct(output_binning(item_id), bucket);
    return output_unscale(item_id).invert(center);
}

LogJacobian RepresentationPipeline::log_abs_jacobian(const std::string& item_id,
                                                     double /*z*/) const {
    LogJacobian result;
    switch (output_spec_.kind) {
        case ReprKind::MeanScale:
            result.value = std::log(1.0 / scale(item_id).a);
            break;
        case ReprKind::GlobalBin:
            result.value = std::log(1.0 / scale(item_id).a);
            result.density_preserving = false;
            break;
        case ReprKind::LocalBin:
            result.density_preserving = false;
            break;
        default:
            throw std::logic_error("unexpected output representation");
    }
    return result;
}

json RepresentationPipeline::to_json() const {
    json scales = json::object();
    for (const auto& [id, sc] : scales_) scales[id] = json::array({sc.a, sc.b});

    auto member_to_json = [](const Member& m) {
        json j;
        j["repr"] = m.spec.id();
        if (m.global_bins) j["global_bins"] = binning_to_json(*m.global_bins);
        if (!m.local_bins.empty()) {
            json lb = json::object();
            for (const auto& [id, spec] : m.local_bins) lb[id] = binning_to_json(spec);
            j["local_bins"] = std::move(lb);
        }
        if (!m.cdfs.empty()) {
            json cd = json::object();
            for (const auto& [id, cdf] : m.cdfs) cd[id] = cdf.sorted_support();
            j["cdfs"] = std::move(cd);
        }
        return j;
    };

    json members = json::array();
    for (const auto& m : input_members_) members.push_back(member_to_json(m));

    return json{{"version", 1},
                {"input", input_spec_.id()},
                {"output", output_spec_.id()},
                {"scales", std::move(scales)},
                {"input_members", std::move(members)},
                {"output_member", member_to_json(output_member_)}};
}

RepresentationPipeline RepresentationPipeline::from_json(const json& doc) {
    if (doc.at("version").get<int>() != 1) {
        throw std::runtime_error("unsupported pipeline document version");
    }
    RepresentationPipeline p;
    p.input_spec_ = parse_repr(doc.at("input").get<std::string>());
    p.output_spec_ = parse_repr(doc.at("output").get<std::string>());

    for (const auto& [id, pair] : doc.at("scales").items()) {
        p.scales_.emplace(id, AffineScale{pair.at(0).get<double>(), pair.at(1).get<double>()});
    }

    auto member_from_json = [](const json& j) {
        Member m;
        m.spec = parse_repr(j.at("repr").get<std::string>());
        if (j.contains("global_bins")) m.global_bins = binning_from_json(j.at("global_bins"));
        if (j.contains("local_bins")) {
            for (const auto& [id, spec] : j.at("local_bins").items()) {
                m.local_bins.emplace(id, binning_from_json(spec));
            }
        }
        if (j.contains("cdfs")) {
            for (const auto& [id, support] : j.at("cdfs").items()) {
                const auto values = support.get<std::vector<double>>();
                m.cdfs.emplace(id, EmpiricalCdf{std::span<const double>{values}});
            }
        }
        return m;
    };

    for (const auto& mj : doc.at("input_members")) p.input_members_.push_back(member_from_json(mj));
    p.output_member_ = member_from_json(doc.at("output_member"));
    return p;
}

RepresentationPipeline fit_pipeline(const Panel& train, const ReprSpec& input,
                                    const ReprSpec& output) {
    return RepresentationPipeline::fit(train, input, output);
}

RepresentationPipeline fit_grb(const Panel& train, int bins, BinKind kind) {
    ReprSpec spec;
    spec.kind = ReprKind::GlobalBin;
    spec.bins = bins;
    spec.bin_kind = kind;
    return RepresentationPipeline::fit(train, spec, spec);
}

RepresentationPipeline fit_lab(const Panel& train, int bins, BinKind kind) {
    ReprSpec spec;
    spec.kind = ReprKind::LocalBin;
    spec.bins = bins;
    spec.bin_kind = kind;
    return RepresentationPipeline::fit(train, spec, spec);
}

RepresentationPipeline fit_hybrid(const Panel& train, std::vector<ReprSpec> members) {
    if (members.size() < 2) {
        throw std::invalid_argument("fit_hybrid: need at least 2 member representations");
    }
    ReprSpec spec;
    spec.kind = ReprKind::Hybrid;
    spec.members = std::move(members);
    return RepresentationPipeline::fit(train, spec, spec);
}

}  // namespace bincast
