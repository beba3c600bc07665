#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bincast/heads.hpp"
#include "bincast/pipeline.hpp"
#include "bincast/rng.hpp"

namespace bincast {

// Smallest E with E^4 >= B (computed in integer arithmetic; pow() rounding
// must not bump exact fourth roots).
int embedding_dim(int bins);

enum class Arch { FeedForward, DilatedCnn };
enum class HeadKind { Categorical, StudentT };

Arch parse_arch(const std::string& token);
std::string to_string(Arch a);

struct NetworkSpec {
    Arch arch = Arch::FeedForward;
    HeadKind head = HeadKind::Categorical;

    std::vector<int> hidden = {40, 40};  // feed-forward hidden widths (ReLU)

    int channels = 16;   // dilated-cnn residual/skip channels
    int cnn_layers = 0;  // 0 -> smallest L with 2^L >= context length

    bool use_covariates = false;
    std::vector<int> lag_offsets;    // extra real channels, value at t-L
    int pit_hidden = 16;             // PIT input tower hidden width
    int embedding_dim_override = 0;  // 0 -> embedding_dim(vocab)
};

// Everything the parameter layout depends on besides NetworkSpec.
struct ModelDims {
    int context = 0;
    int horizon = 0;
    int head_bins = 0;  // categorical head width; ignored for student-t
    std::vector<ReprKind> member_kinds;
    std::vector<int> member_vocabs;  // embedding vocab / pit parity bins
    int cov_dim = 0;
};

// Flat parameter vector with named views and a parallel gradient buffer.
class ParamStore {
public:
    enum class Init { FanIn, Bias, Embedding };

    struct Entry {
        std::string name;
        std::size_t offset = 0;
        std::size_t rows = 0;
        std::size_t cols = 0;
        Init init = Init::FanIn;
    };

    std::size_t add(const std::string& name, std::size_t rows, std::size_t cols, Init init);

    std::size_t size() const { return values_.size(); }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    std::span<double> grads() { return grads_; }
    std::span<const double> grads() const { return grads_; }
    void zero_grads() { std::fill(grads_.begin(), grads_.end(), 0.0); }

    std::span<double> view(std::size_t entry_index);
    std::span<const double> view(std::size_t entry_index) const;
    std::span<double> grad_view(std::size_t entry_index);
    const std::vector<Entry>& entries() const { return entries_; }

    // uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) weights, zero biases,
    // uniform(-0.05, 0.05) embeddings; fills entries in registration order
    void init(Rng& rng);

private:
    std::vector<Entry> entries_;
    std::vector<double> values_;
    std::vector<double> grads_;
};

// One training/prediction window, already transformed: per-member tokens,
// covariate rows and lag channels for W steps, plus targets aligned with
// the window. The feed-forward net reads the first `context` steps and is
// scored on the final horizon; the causal cnn reads steps [0, W-1) and is
// scored on every next-step target.
struct WindowData {
    std::string item_id;
    std::size_t start = 0;
    std::vector<MemberTokens> tokens;
    std::vector<std::vector<double>> covariates;  // per step (may be empty)
    std::vector<std::vector<double>> lags;        // per step (may be empty)
    std::vector<int> cat_targets;                 // per step, 1-based buckets
    std::vector<double> raw_targets;              // per step, original domain
    double st_scale_m = 1.0;
    int length = 0;  // W = context + horizon
};

// The two architectures behind one interface: input encoding (embedding
// tables, PIT tower, real channels), trunk, head projection, and exact
// reverse-mode gradients for all parameters.
class Network {
public:
    Network(const NetworkSpec& spec, const ModelDims& dims);

    const NetworkSpec& spec() const { return spec_; }
    const ModelDims& dims() const { return dims_; }
    ParamStore& params() { return params_; }
    const ParamStore& params() const { return params_; }

    int feature_dim() const { return feature_dim_; }
    int head_param_count() const;
    int cnn_layer_count() const { return cnn_layers_; }

    void init_params(Rng& rng) { params_.init(rng); }

    // Per-window NLL summed over the predicted steps. When weight != 0 the
    // parameter gradients (scaled by weight) are accumulated into the
    // gradient buffer.
    double loss_and_grad(const WindowData& window, double weight);
    double loss(const WindowData& window) const;

    // head parameters for each forecast step (feed-forward; window supplies
    // the context steps)
    std::vector<std::vector<double>> forward_feedforward(const WindowData& window) const;
    // head parameters at every position t in [0, W-1), predicting step t+1
    std::vector<std::vector<double>> forward_cnn(const WindowData& window) const;

    // encoded per-step feature vectors (the model-side input assembly)
    std::vector<std::vector<double>> encode_features(const WindowData& window,
                                                     std::size_t num_steps) const;

    // Incremental causal-cnn evaluation for autoregressive rollout: each
    // push consumes one step's features and returns the head parameters for
    // the next step in O(layers * channels^2).
    class Decoder {
    public:
        explicit Decoder(const Network& net);
        void reset();
        std::vector<double> push(std::span<const double> features);

    private:
        const Network& net_;
        std::vector<std::vector<double>> history_;  // per layer, past residual inputs
    };

private:
    NetworkSpec spec_;
    ModelDims dims_;
    ParamStore params_;
    int feature_dim_ = 0;
    int cnn_layers_ = 0;

    // entry indices into params_
    std::vector<std::size_t> emb_;  // per binned member
    struct PitTower {
        std::size_t w1, b1, w2, b2;
        int out_dim;
    };
    std::vector<PitTower> pit_;  // per pit member (index parallel to members)
    std::vector<int> member_width_;
    std::vector<std::size_t> ff_w_, ff_b_;
    struct CnnLayer {
        std::size_t wf_prev, wf_cur, bf;
        std::size_t wg_prev, wg_cur, bg;
        std::size_t ws, bs, wr, br;
        int dilation;
    };
    std::size_t cnn_in_w_ = 0, cnn_in_b_ = 0;
    std::vector<CnnLayer> cnn_layers_v_;
    std::size_t head_w1_ = 0, head_b1_ = 0, head_w2_ = 0, head_b2_ = 0;

    void build_layout();
    void encode_step(const WindowData& w, std::size_t t, std::span<double> out) const;
    void encode_step_tokens(const std::vector<MemberTokens>& tokens,
                            std::span<const double> cov, std::span<const double> lags,
                            std::size_t t, std::span<double> out) const;
    void encode_backward(const WindowData& w, std::size_t t, std::span<const double> d_features,
                         double weight);

    double loss_grad_feedforward(const WindowData& w, double weight, bool compute_grad);
    double loss_grad_cnn(const WindowData& w, double weight, bool compute_grad);

    // d(NLL)/d(head outputs) for one predicted step; returns the NLL
    double head_loss(std::span<const double> head_out, const WindowData& w, std::size_t target_step,
                     std::span<double> d_out) const;

    friend class Decoder;
};

}  // namespace bincast
