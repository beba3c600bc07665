#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bincast/binning.hpp"
#include "bincast/ecdf.hpp"
#include "bincast/scaling.hpp"
#include "bincast/timeseries.hpp"

namespace bincast {

// Representation modes. "grb" scales each series by its mean and bins the
// pooled scaled values with one shared edge set; "lab" bins each series
// individually; "pit" maps through the per-series empirical CDF; "ms" is
// plain mean scaling; "hyb" applies several binnings in parallel on the
// input side.
enum class ReprKind { MeanScale, Pit, GlobalBin, LocalBin, Hybrid };

struct ReprSpec {
    ReprKind kind = ReprKind::MeanScale;
    int bins = 1024;
    BinKind bin_kind = BinKind::Quantile;
    std::vector<ReprSpec> members;  // Hybrid only

    // canonical id, e.g. "grb(1024)", "lab(64,linear)", "hyb(grb(16),lab(64))"
    std::string id() const;
};

// Parses a representation id. Accepted forms: "ms", "grb", "grb(B)",
// "grb(B,kind)", "lab(...)", "pit(B)", "hyb(m1,m2,...)" where a bare
// integer member is shorthand for grb with that bin count and bare
// "grb"/"lab" members default to 1024 bins. Throws std::invalid_argument
// listing the supported ids on anything else.
ReprSpec parse_repr(const std::string& id);

// Per-step model-facing tokens produced by one input member.
struct MemberTokens {
    ReprKind kind = ReprKind::MeanScale;
    int vocab = 0;              // embedding vocabulary (binned members), or
                                // configured parity bins (pit); 0 for ms
    std::vector<int> ids;       // bucket ids, 1-based (binned members)
    std::vector<double> reals;  // scaled values (ms) or CDF values (pit)
};

struct LogJacobian {
    double value = 0.0;
    bool density_preserving = true;
};

double log_abs_det_affine_chain(std::span<const AffineScale> stages);

// A fitted, serializable chain of input and output transforms with
// per-series state. Fitting consumes training-range values only; the
// fitted object is immutable and safe for concurrent use.
class RepresentationPipeline {
public:
    struct Member {
        ReprSpec spec;
        std::optional<BinningSpec> global_bins;         // GlobalBin
        std::map<std::string, BinningSpec> local_bins;  // LocalBin
        std::map<std::string, EmpiricalCdf> cdfs;       // Pit
    };

    RepresentationPipeline() = default;

    static RepresentationPipeline fit(const Panel& train, const ReprSpec& input,
                                      const ReprSpec& output);

    const ReprSpec& input_spec() const { return input_spec_; }
    const ReprSpec& output_spec() const { return output_spec_; }
    const std::vector<Member>& input_members() const { return input_members_; }

    // mean scale fitted on the training range (always available)
    const AffineScale& scale(const std::string& item_id) const;
    bool has_series(const std::string& item_id) const { return scales_.count(item_id) > 0; }

    // ---- input side -------------------------------------------------------
    std::vector<MemberTokens> transform_input(const std::string& item_id,
                                              std::span<const double> values) const;
    // appends the tokens of one value to already-transformed windows
    // (autoregressive feedback during prediction)
    void append_value(const std::string& item_id, double z,
                      std::vector<MemberTokens>& tokens) const;

    // ---- output side ------------------------------------------------------
    bool output_binned() const { return output_spec_.kind != ReprKind::MeanScale; }
    const BinningSpec& output_binning(const std::string& item_id) const;
    int output_vocab(const std::string& item_id) const;
    // affine whose inverse maps reconstructed centers to the original
    // domain (the series scale for grb, identity for lab)
    AffineScale output_unscale(const std::string& item_id) const;
    std::vector<int> output_targets(const std::string& item_id,
                                    std::span<const double> values) const;
    double invert_output_bucket(const std::string& item_id, int bucket) const;
    // conditioning-range mean scale m_i for the Student-t head
    double output_scale_m(const std::string& item_id) const { return scale(item_id).a; }

    // Change-of-variables term of the output chain at z: sum of log|1/a|
    // over its affine stages. A discretizing output stage contributes 0 and
    // clears density_preserving.
    LogJacobian log_abs_jacobian(const std::string& item_id, double z) const;

    nlohmann::json to_json() const;
    static RepresentationPipeline from_json(const nlohmann::json& doc);

private:
    ReprSpec input_spec_, output_spec_;
    std::vector<Member> input_members_;
    Member output_member_;
    std::map<std::string, AffineScale> scales_;

    static Member fit_member(const Panel& train, const ReprSpec& spec,
                             const std::map<std::string, AffineScale>& scales);
    MemberTokens member_tokens(const Member& m, const std::string& item_id,
                               std::span<const double> values) const;
};

// Spec-level fit entry points. fit_grb/fit_lab use the same representation
// on both sides; fit_hybrid uses the member list on the input side and
// designates the finest global-binning member (falling back to the finest
// local one) as the output representation.
RepresentationPipeline fit_pipeline(const Panel& train, const ReprSpec& input,
                                    const ReprSpec& output);
RepresentationPipeline fit_grb(const Panel& train, int bins,
                               BinKind kind = BinKind::Quantile);
RepresentationPipeline fit_lab(const Panel& train, int bins,
                               BinKind kind = BinKind::Quantile);
RepresentationPipeline fit_hybrid(const Panel& train, std::vector<ReprSpec> members);

}  // namespace bincast
