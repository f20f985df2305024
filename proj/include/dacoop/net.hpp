#pragma once

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "dacoop/common.hpp"
#include "dacoop/env.hpp"
#include "dacoop/random.hpp"

namespace dacoop {

// Fixed-width encoding of a local observation. Neighbor rows are sorted by
// ascending distance so pooled sums have a deterministic summation order.
struct EncodedObservation {
    std::array<double, 6> local{};                   // d_o, sin/cos phi_o, d_e, sin/cos phi_e
    std::vector<std::array<double, 3>> neighbors;    // d_j, sin phi_j, cos phi_j
};

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Distances are normalized by the sensing range (d_o, d_j) and the arena
// diagonal (d_e, which is observed beyond the sensing range).
inline EncodedObservation encode_observation(const Observation& obs, double d_sense_mm,
                                             double arena_diag_mm) {
    EncodedObservation enc;
    enc.local = {clamp01(obs.d_o_mm / d_sense_mm), std::sin(obs.phi_o_rad),
                 std::cos(obs.phi_o_rad),          clamp01(obs.d_e_mm / arena_diag_mm),
                 std::sin(obs.phi_e_rad),          std::cos(obs.phi_e_rad)};
    enc.neighbors.reserve(obs.neighbors.size());
    for (const auto& n : obs.neighbors)
        enc.neighbors.push_back(
            {clamp01(n.d_mm / d_sense_mm), std::sin(n.phi_rad), std::cos(n.phi_rad)});
    return enc;
}

struct NetworkShape {
    int neighbor_features = 3;
    int local_features = 6;
    int embed_units = 128;
    int trunk_units = 128;
    int stream_units = 64;
    int num_actions = 24;

    int trunk_inputs() const { return embed_units + local_features; }
    bool operator==(const NetworkShape&) const = default;
};

struct Tensor {
    std::string name;
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Tensor() = default;
    Tensor(std::string n, int r, int c) : name(std::move(n)), rows(r), cols(c), v(r * c, 0.0) {}
    double& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }
    std::size_t size() const { return v.size(); }
};

// Weight tensors of the embedding plus dueling Q-network. Biases are stored as
// n x 1 tensors.
struct NetworkParams {
    enum Index {
        kEmbedW, kEmbedB, kTrunkW, kTrunkB,
        kAdv1W, kAdv1B, kAdv2W, kAdv2B,
        kVal1W, kVal1B, kVal2W, kVal2B,
        kTensorCount
    };

    NetworkShape shape;
    std::vector<Tensor> t;

    static NetworkParams zeros(const NetworkShape& s) {
        NetworkParams p;
        p.shape = s;
        p.t.reserve(kTensorCount);
        p.t.emplace_back("embed.w", s.embed_units, s.neighbor_features);
        p.t.emplace_back("embed.b", s.embed_units, 1);
        p.t.emplace_back("trunk.w", s.trunk_units, s.trunk_inputs());
        p.t.emplace_back("trunk.b", s.trunk_units, 1);
        p.t.emplace_back("adv1.w", s.stream_units, s.trunk_units);
        p.t.emplace_back("adv1.b", s.stream_units, 1);
        p.t.emplace_back("adv2.w", s.num_actions, s.stream_units);
        p.t.emplace_back("adv2.b", s.num_actions, 1);
        p.t.emplace_back("val1.w", s.stream_units, s.trunk_units);
        p.t.emplace_back("val1.b", s.stream_units, 1);
        p.t.emplace_back("val2.w", 1, s.stream_units);
        p.t.emplace_back("val2.b", 1, 1);
        return p;
    }

    // Uniform +-sqrt(6/(fan_in+fan_out)) weights, zero biases.
    static NetworkParams init(const NetworkShape& s, RandomStream& rng) {
        NetworkParams p = zeros(s);
        for (auto& tensor : p.t) {
            if (tensor.cols == 1) continue;  // bias
            double limit = std::sqrt(6.0 / (tensor.cols + tensor.rows));
            for (auto& w : tensor.v) w = rng.uniform(-limit, limit);
        }
        return p;
    }

    std::size_t total_weights() const {
        std::size_t n = 0;
        for (const auto& tensor : t) n += tensor.size();
        return n;
    }
};

// Deep copy used for the target network.
inline NetworkParams clone_into_target(const NetworkParams& params) { return params; }

// Activations cached by the forward pass; reused across calls to avoid
// reallocation in the training loop.
struct ForwardCache {
    std::vector<double> neighbor_z;  // m * embed_units pre-activations
    std::vector<double> pooled;      // embed_units
    std::vector<double> x;           // trunk inputs
    std::vector<double> trunk_z, trunk_h;
    std::vector<double> adv1_z, adv1_h;
    std::vector<double> val1_z, val1_h;
    std::vector<double> adv;  // num_actions
    double val = 0.0;
    std::vector<double> q;  // num_actions
    int m = 0;              // neighbor count
};

namespace detail {

inline void check_finite(std::span<const double> values, const char* layer) {
    for (double v : values)
        if (!std::isfinite(v))
            throw NumericError(std::string("numeric overflow in layer ") + layer);
}

// out_z = W*in + b, out_h = relu(out_z)
inline void dense_relu(const Tensor& w, const Tensor& b, std::span<const double> in,
                       std::vector<double>& out_z, std::vector<double>& out_h) {
    out_z.resize(static_cast<std::size_t>(w.rows));
    out_h.resize(static_cast<std::size_t>(w.rows));
    for (int r = 0; r < w.rows; ++r) {
        const double* wr = w.v.data() + static_cast<std::size_t>(r) * w.cols;
        double acc = b.v[static_cast<std::size_t>(r)];
        for (int c = 0; c < w.cols; ++c) acc += wr[c] * in[static_cast<std::size_t>(c)];
        out_z[static_cast<std::size_t>(r)] = acc;
        out_h[static_cast<std::size_t>(r)] = acc > 0.0 ? acc : 0.0;
    }
}

inline void dense_linear(const Tensor& w, const Tensor& b, std::span<const double> in,
                         std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(w.rows));
    for (int r = 0; r < w.rows; ++r) {
        const double* wr = w.v.data() + static_cast<std::size_t>(r) * w.cols;
        double acc = b.v[static_cast<std::size_t>(r)];
        for (int c = 0; c < w.cols; ++c) acc += wr[c] * in[static_cast<std::size_t>(c)];
        out[static_cast<std::size_t>(r)] = acc;
    }
}

}  // namespace detail

// Q = V + A - mean(A); invariant to constant shifts of the advantage head.
inline void dueling_combine(std::span<const double> adv, double val, std::vector<double>& q) {
    q.resize(adv.size());
    double mean = 0.0;
    for (double a : adv) mean += a;
    mean /= static_cast<double>(adv.size());
    for (std::size_t i = 0; i < adv.size(); ++i) q[i] = val + adv[i] - mean;
}

inline void q_forward(const EncodedObservation& enc, const NetworkParams& params,
                      ForwardCache& cache) {
    const NetworkShape& s = params.shape;
    const int e = s.embed_units;
    cache.m = static_cast<int>(enc.neighbors.size());

    // Per-neighbor embedding, then elementwise mean; empty set pools to zero.
    cache.neighbor_z.assign(static_cast<std::size_t>(cache.m) * e, 0.0);
    cache.pooled.assign(static_cast<std::size_t>(e), 0.0);
    const Tensor& ew = params.t[NetworkParams::kEmbedW];
    const Tensor& eb = params.t[NetworkParams::kEmbedB];
    for (int j = 0; j < cache.m; ++j) {
        const auto& f = enc.neighbors[static_cast<std::size_t>(j)];
        if (static_cast<int>(f.size()) != s.neighbor_features)
            throw SimError("neighbor feature width mismatch");
        double* zj = cache.neighbor_z.data() + static_cast<std::size_t>(j) * e;
        for (int r = 0; r < e; ++r) {
            const double* wr = ew.v.data() + static_cast<std::size_t>(r) * ew.cols;
            double acc = eb.v[static_cast<std::size_t>(r)];
            for (int c = 0; c < s.neighbor_features; ++c) acc += wr[c] * f[static_cast<std::size_t>(c)];
            zj[r] = acc;
            if (acc > 0.0) cache.pooled[static_cast<std::size_t>(r)] += acc;
        }
    }
    if (cache.m > 0) {
        double inv = 1.0 / static_cast<double>(cache.m);
        for (auto& v : cache.pooled) v *= inv;
    }
    detail::check_finite(cache.pooled, "embed");

    cache.x.resize(static_cast<std::size_t>(s.trunk_inputs()));
    std::copy(cache.pooled.begin(), cache.pooled.end(), cache.x.begin());
    std::copy(enc.local.begin(), enc.local.end(), cache.x.begin() + e);

    detail::dense_relu(params.t[NetworkParams::kTrunkW], params.t[NetworkParams::kTrunkB],
                       cache.x, cache.trunk_z, cache.trunk_h);
    detail::check_finite(cache.trunk_h, "trunk");
    detail::dense_relu(params.t[NetworkParams::kAdv1W], params.t[NetworkParams::kAdv1B],
                       cache.trunk_h, cache.adv1_z, cache.adv1_h);
    detail::dense_linear(params.t[NetworkParams::kAdv2W], params.t[NetworkParams::kAdv2B],
                         cache.adv1_h, cache.adv);
    detail::check_finite(cache.adv, "advantage");
    detail::dense_relu(params.t[NetworkParams::kVal1W], params.t[NetworkParams::kVal1B],
                       cache.trunk_h, cache.val1_z, cache.val1_h);
    std::vector<double> val_out;
    detail::dense_linear(params.t[NetworkParams::kVal2W], params.t[NetworkParams::kVal2B],
                         cache.val1_h, val_out);
    cache.val = val_out[0];
    if (!std::isfinite(cache.val)) throw NumericError("numeric overflow in layer value");

    dueling_combine(cache.adv, cache.val, cache.q);
}

inline std::vector<double> q_forward(const EncodedObservation& enc, const NetworkParams& params) {
    ForwardCache cache;
    q_forward(enc, params, cache);
    return cache.q;
}

struct Gradients {
    std::vector<Tensor> t;

    static Gradients zeros_like(const NetworkParams& p) {
        Gradients g;
        g.t.reserve(p.t.size());
        for (const auto& tensor : p.t) g.t.emplace_back(tensor.name, tensor.rows, tensor.cols);
        return g;
    }

    void clear() {
        for (auto& tensor : t) std::fill(tensor.v.begin(), tensor.v.end(), 0.0);
    }

    void scale(double s) {
        for (auto& tensor : t)
            for (auto& v : tensor.v) v *= s;
    }
};

// Accumulates gradients of is_weight * 0.5 * td_error^2 with respect to all
// parameters into `grads`. The cache must come from a forward pass of `enc`
// under `params`.
inline void q_backward(const EncodedObservation& enc, const NetworkParams& params,
                       const ForwardCache& cache, int action_index, double td_error,
                       double is_weight, Gradients& grads) {
    const NetworkShape& s = params.shape;
    const int h = s.num_actions;
    const double dq = -is_weight * td_error;  // dL/dQ[action]

    // Dueling head: dA_k = dq * (delta_[k=a] - 1/H), dV = dq.
    thread_local std::vector<double> d_adv, d_adv1, d_val1, d_trunk, d_x;
    d_adv.assign(static_cast<std::size_t>(h), -dq / static_cast<double>(h));
    d_adv[static_cast<std::size_t>(action_index)] += dq;
    double d_val = dq;

    // Advantage output layer.
    {
        const Tensor& w = params.t[NetworkParams::kAdv2W];
        Tensor& gw = grads.t[NetworkParams::kAdv2W];
        Tensor& gb = grads.t[NetworkParams::kAdv2B];
        d_adv1.assign(static_cast<std::size_t>(s.stream_units), 0.0);
        for (int r = 0; r < h; ++r) {
            double g = d_adv[static_cast<std::size_t>(r)];
            gb.v[static_cast<std::size_t>(r)] += g;
            const double* wr = w.v.data() + static_cast<std::size_t>(r) * w.cols;
            double* gwr = gw.v.data() + static_cast<std::size_t>(r) * w.cols;
            for (int c = 0; c < w.cols; ++c) {
                gwr[c] += g * cache.adv1_h[static_cast<std::size_t>(c)];
                d_adv1[static_cast<std::size_t>(c)] += g * wr[c];
            }
        }
        for (int c = 0; c < s.stream_units; ++c)
            if (cache.adv1_z[static_cast<std::size_t>(c)] <= 0.0) d_adv1[static_cast<std::size_t>(c)] = 0.0;
    }

    // Value output layer.
    {
        const Tensor& w = params.t[NetworkParams::kVal2W];
        Tensor& gw = grads.t[NetworkParams::kVal2W];
        Tensor& gb = grads.t[NetworkParams::kVal2B];
        gb.v[0] += d_val;
        d_val1.assign(static_cast<std::size_t>(s.stream_units), 0.0);
        for (int c = 0; c < w.cols; ++c) {
            gw.v[static_cast<std::size_t>(c)] += d_val * cache.val1_h[static_cast<std::size_t>(c)];
            d_val1[static_cast<std::size_t>(c)] = d_val * w.v[static_cast<std::size_t>(c)];
        }
        for (int c = 0; c < s.stream_units; ++c)
            if (cache.val1_z[static_cast<std::size_t>(c)] <= 0.0) d_val1[static_cast<std::size_t>(c)] = 0.0;
    }

    // Stream input layers back to the trunk.
    d_trunk.assign(static_cast<std::size_t>(s.trunk_units), 0.0);
    {
        const Tensor& w = params.t[NetworkParams::kAdv1W];
        Tensor& gw = grads.t[NetworkParams::kAdv1W];
        Tensor& gb = grads.t[NetworkParams::kAdv1B];
        for (int r = 0; r < s.stream_units; ++r) {
            double g = d_adv1[static_cast<std::size_t>(r)];
            if (g == 0.0) continue;
            gb.v[static_cast<std::size_t>(r)] += g;
            const double* wr = w.v.data() + static_cast<std::size_t>(r) * w.cols;
            double* gwr = gw.v.data() + static_cast<std::size_t>(r) * w.cols;
            for (int c = 0; c < w.cols; ++c) {
                gwr[c] += g * cache.trunk_h[static_cast<std::size_t>(c)];
                d_trunk[static_cast<std::size_t>(c)] += g * wr[c];
            }
        }
    }
    {
        const Tensor& w = params.t[NetworkParams::kVal1W];
        Tensor& gw = grads.t[NetworkParams::kVal1W];
        Tensor& gb = grads.t[NetworkParams::kVal1B];
        for (int r = 0; r < s.stream_units; ++r) {
            double g = d_val1[static_cast<std::size_t>(r)];
            if (g == 0.0) continue;
            gb.v[static_cast<std::size_t>(r)] += g;
            const double* wr = w.v.data() + static_cast<std::size_t>(r) * w.cols;
            double* gwr = gw.v.data() + static_cast<std::size_t>(r) * w.cols;
            for (int c = 0; c < w.cols; ++c) {
                gwr[c] += g * cache.trunk_h[static_cast<std::size_t>(c)];
                d_trunk[static_cast<std::size_t>(c)] += g * wr[c];
            }
        }
    }
    for (int c = 0; c < s.trunk_units; ++c)
        if (cache.trunk_z[static_cast<std::size_t>(c)] <= 0.0) d_trunk[static_cast<std::size_t>(c)] = 0.0;

    // Trunk layer back to its inputs (pooled embedding ++ local features).
    d_x.assign(static_cast<std::size_t>(s.trunk_inputs()), 0.0);
    {
        const Tensor& w = params.t[NetworkParams::kTrunkW];
        Tensor& gw = grads.t[NetworkParams::kTrunkW];
        Tensor& gb = grads.t[NetworkParams::kTrunkB];
        for (int r = 0; r < s.trunk_units; ++r) {
            double g = d_trunk[static_cast<std::size_t>(r)];
            if (g == 0.0) continue;
            gb.v[static_cast<std::size_t>(r)] += g;
            const double* wr = w.v.data() + static_cast<std::size_t>(r) * w.cols;
            double* gwr = gw.v.data() + static_cast<std::size_t>(r) * w.cols;
            for (int c = 0; c < w.cols; ++c) {
                gwr[c] += g * cache.x[static_cast<std::size_t>(c)];
                d_x[static_cast<std::size_t>(c)] += g * wr[c];
            }
        }
    }

    // Mean pooling spreads gradient evenly across neighbors.
    if (cache.m > 0) {
        const int e = s.embed_units;
        Tensor& gw = grads.t[NetworkParams::kEmbedW];
        Tensor& gb = grads.t[NetworkParams::kEmbedB];
        double inv_m = 1.0 / static_cast<double>(cache.m);
        for (int j = 0; j < cache.m; ++j) {
            const auto& f = enc.neighbors[static_cast<std::size_t>(j)];
            const double* zj = cache.neighbor_z.data() + static_cast<std::size_t>(j) * e;
            for (int r = 0; r < e; ++r) {
                if (zj[r] <= 0.0) continue;
                double g = d_x[static_cast<std::size_t>(r)] * inv_m;
                if (g == 0.0) continue;
                gb.v[static_cast<std::size_t>(r)] += g;
                double* gwr = gw.v.data() + static_cast<std::size_t>(r) * s.neighbor_features;
                for (int c = 0; c < s.neighbor_features; ++c)
                    gwr[c] += g * f[static_cast<std::size_t>(c)];
            }
        }
    }
}

struct AdamState {
    std::vector<Tensor> m;
    std::vector<Tensor> v;
    long step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState zeros_like(const NetworkParams& p) {
        AdamState s;
        s.m.reserve(p.t.size());
        s.v.reserve(p.t.size());
        for (const auto& tensor : p.t) {
            s.m.emplace_back(tensor.name, tensor.rows, tensor.cols);
            s.v.emplace_back(tensor.name, tensor.rows, tensor.cols);
        }
        return s;
    }
};

inline void adam_step(NetworkParams& params, const Gradients& grads, AdamState& state,
                      double lr) {
    ++state.step;
    double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.t.size(); ++i) {
        auto& w = params.t[i].v;
        const auto& g = grads.t[i].v;
        auto& m = state.m[i].v;
        auto& v = state.v[i].v;
        for (std::size_t k = 0; k < w.size(); ++k) {
            m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
            v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
            double m_hat = m[k] / bc1;
            double v_hat = v[k] / bc2;
            w[k] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
        }
    }
}

// ---------------------------------------------------------------------------
// Checkpoint file: "DACOOP1" magic, tensor manifest (names and shapes),
// row-major little-endian f64 arrays, trailing FNV-1a64 checksum of all
// preceding bytes.
// ---------------------------------------------------------------------------

namespace detail {

class Fnv1a64 {
public:
    void update(const void* data, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            hash_ ^= bytes[i];
            hash_ *= 1099511628211ULL;
        }
    }
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 14695981039346656037ULL;
};

template <typename T>
void write_raw(std::ostream& out, Fnv1a64& sum, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
    sum.update(&value, sizeof(T));
}

template <typename T>
T read_raw(std::istream& in, Fnv1a64& sum) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw ArtifactError("checkpoint truncated");
    sum.update(&value, sizeof(T));
    return value;
}

}  // namespace detail

inline constexpr char kCheckpointMagic[] = "DACOOP1";

inline void save_checkpoint(const NetworkParams& params, std::ostream& out) {
    detail::Fnv1a64 sum;
    out.write(kCheckpointMagic, 7);
    sum.update(kCheckpointMagic, 7);
    detail::write_raw(out, sum, static_cast<std::uint32_t>(params.t.size()));
    for (const auto& tensor : params.t) {
        detail::write_raw(out, sum, static_cast<std::uint16_t>(tensor.name.size()));
        out.write(tensor.name.data(), static_cast<std::streamsize>(tensor.name.size()));
        sum.update(tensor.name.data(), tensor.name.size());
        detail::write_raw(out, sum, static_cast<std::uint32_t>(tensor.rows));
        detail::write_raw(out, sum, static_cast<std::uint32_t>(tensor.cols));
    }
    for (const auto& tensor : params.t) {
        out.write(reinterpret_cast<const char*>(tensor.v.data()),
                  static_cast<std::streamsize>(tensor.v.size() * sizeof(double)));
        sum.update(tensor.v.data(), tensor.v.size() * sizeof(double));
    }
    std::uint64_t checksum = sum.value();
    out.write(reinterpret_cast<const char*>(&checksum), sizeof(checksum));
    if (!out) throw ArtifactError("checkpoint write failed");
}

inline void save_checkpoint(const NetworkParams& params, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArtifactError("cannot open checkpoint for writing: " + path);
    save_checkpoint(params, out);
}

inline NetworkParams load_checkpoint(std::istream& in) {
    detail::Fnv1a64 sum;
    char magic[7];
    in.read(magic, 7);
    if (!in || std::memcmp(magic, kCheckpointMagic, 7) != 0)
        throw ArtifactError("checkpoint load error: bad magic");
    sum.update(magic, 7);
    auto count = detail::read_raw<std::uint32_t>(in, sum);
    if (count != NetworkParams::kTensorCount)
        throw ArtifactError("checkpoint load error: unexpected tensor count");
    NetworkParams params;
    params.t.resize(count);
    for (auto& tensor : params.t) {
        auto name_len = detail::read_raw<std::uint16_t>(in, sum);
        tensor.name.resize(name_len);
        in.read(tensor.name.data(), name_len);
        if (!in) throw ArtifactError("checkpoint truncated");
        sum.update(tensor.name.data(), tensor.name.size());
        tensor.rows = static_cast<int>(detail::read_raw<std::uint32_t>(in, sum));
        tensor.cols = static_cast<int>(detail::read_raw<std::uint32_t>(in, sum));
        if (tensor.rows <= 0 || tensor.cols <= 0)
            throw ArtifactError("checkpoint load error: bad tensor shape");
        tensor.v.resize(static_cast<std::size_t>(tensor.rows) * tensor.cols);
    }
    for (auto& tensor : params.t) {
        in.read(reinterpret_cast<char*>(tensor.v.data()),
                static_cast<std::streamsize>(tensor.v.size() * sizeof(double)));
        if (!in) throw ArtifactError("checkpoint truncated");
        sum.update(tensor.v.data(), tensor.v.size() * sizeof(double));
    }
    std::uint64_t stored = 0;
    in.read(reinterpret_cast<char*>(&stored), sizeof(stored));
    if (!in) throw ArtifactError("checkpoint truncated");
    if (stored != sum.value()) throw ArtifactError("checkpoint load error: checksum mismatch");

    // Reconstruct the shape from the manifest and cross-check consistency.
    NetworkShape s;
    s.embed_units = params.t[NetworkParams::kEmbedW].rows;
    s.neighbor_features = params.t[NetworkParams::kEmbedW].cols;
    s.trunk_units = params.t[NetworkParams::kTrunkW].rows;
    s.local_features = params.t[NetworkParams::kTrunkW].cols - s.embed_units;
    s.stream_units = params.t[NetworkParams::kAdv1W].rows;
    s.num_actions = params.t[NetworkParams::kAdv2W].rows;
    params.shape = s;
    NetworkParams expect = NetworkParams::zeros(s);
    for (std::size_t i = 0; i < params.t.size(); ++i) {
        if (params.t[i].name != expect.t[i].name || params.t[i].rows != expect.t[i].rows ||
            params.t[i].cols != expect.t[i].cols)
            throw ArtifactError("checkpoint load error: inconsistent manifest");
    }
    return params;
}

inline NetworkParams load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArtifactError("cannot open checkpoint: " + path);
    return load_checkpoint(in);
}

}  // namespace dacoop
