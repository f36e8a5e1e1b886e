#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "affect/models/cnn.hpp"
#include "affect/models/knn.hpp"
#include "affect/models/linear.hpp"
#include "affect/models/lstm.hpp"
#include "affect/models/mlp.hpp"
#include "affect/models/naive_bayes.hpp"

namespace affect {

// A trained classifier of one of the families, tagged with task and embedding
// provenance. Persisted as a self-describing text file: a header of
// "key value" lines, then named parameter arrays in shortest-round-trip
// decimal, so load(save(m)) reproduces predictions exactly.
struct ModelArtifact {
    static constexpr int kFormatVersion = 1;

    Family family = Family::ovr;
    std::string task_id;
    std::string embedding_name;
    std::size_t dim = 0;       // embedding dimension
    std::size_t max_len = 0;
    std::size_t n_classes = 0;
    bool multi_label = false;
    std::map<std::string, std::string> hyperparams;

    std::variant<LinearModel<float>, GaussianNBModel<float>, BinaryRelevanceGNB<float>,
                 KNNModel<float>, MLPModel<float>, ConvModel<float>, LSTMModel<float>>
        model;

    bool uses_sequence() const { return family == Family::cnn || family == Family::lstm; }

    std::size_t predict_class(const std::vector<float>& flat, const Matrix<float>& seq) const;
    std::vector<std::uint8_t> predict_labels(const std::vector<float>& flat,
                                             const Matrix<float>& seq) const;
};

namespace detail {

inline void write_array(std::ofstream& out, const std::string& name, std::span<const float> v) {
    out << "array " << name << ' ' << v.size() << '\n';
    char buf[64];
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v[i]);
        if (i) out << ' ';
        out.write(buf, ptr - buf);
    }
    out << '\n';
}

inline void write_label_array(std::ofstream& out, const std::string& name,
                              const std::vector<std::vector<std::uint8_t>>& labels) {
    out << "labels " << name << ' ' << labels.size() << ' '
        << (labels.empty() ? 0 : labels.front().size()) << '\n';
    for (const auto& row : labels) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << int(row[i]);
        out << '\n';
    }
}

class ArtifactReader {
public:
    explicit ArtifactReader(const std::string& path) : in_(path), path_(path) {
        if (!in_) throw_config("cannot open model file '" + path + "'");
    }

    std::string next_line() {
        std::string line;
        if (!std::getline(in_, line)) throw_config("model file '" + path_ + "' truncated");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }

    std::vector<float> read_array(const std::string& expect_name) {
        std::istringstream head(next_line());
        std::string kw, name;
        std::size_t n = 0;
        head >> kw >> name >> n;
        if (kw != "array" || name != expect_name) {
            throw_config("model file '" + path_ + "': expected array '" + expect_name + "'");
        }
        std::string line = next_line();
        std::vector<float> v;
        v.reserve(n);
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && line[pos] == ' ') ++pos;
            if (pos >= line.size()) break;
            std::size_t end = line.find(' ', pos);
            if (end == std::string::npos) end = line.size();
            float x = 0.f;
            auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + end, x);
            if (ec != std::errc()) throw_config("model file '" + path_ + "': bad float");
            v.push_back(x);
            pos = end;
        }
        if (v.size() != n) throw_config("model file '" + path_ + "': array length mismatch");
        return v;
    }

    std::vector<std::vector<std::uint8_t>> read_labels(const std::string& expect_name) {
        std::istringstream head(next_line());
        std::string kw, name;
        std::size_t rows = 0, cols = 0;
        head >> kw >> name >> rows >> cols;
        if (kw != "labels" || name != expect_name) {
            throw_config("model file '" + path_ + "': expected labels '" + expect_name + "'");
        }
        std::vector<std::vector<std::uint8_t>> labels(rows);
        for (auto& row : labels) {
            std::istringstream ls(next_line());
            row.resize(cols);
            for (std::size_t i = 0; i < cols; ++i) {
                int b = 0;
                ls >> b;
                row[i] = static_cast<std::uint8_t>(b);
            }
        }
        return labels;
    }

private:
    std::ifstream in_;
    std::string path_;
};

} // namespace detail

inline void save_model(const ModelArtifact& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw_config("cannot write model file '" + path + "'");
    out << "affectmodel " << ModelArtifact::kFormatVersion << '\n';
    out << "family " << to_string(a.family) << '\n';
    out << "task " << a.task_id << '\n';
    out << "embedding " << a.embedding_name << '\n';
    out << "dim " << a.dim << '\n';
    out << "max_len " << a.max_len << '\n';
    out << "classes " << a.n_classes << '\n';
    out << "multi_label " << (a.multi_label ? 1 : 0) << '\n';
    for (const auto& [k, v] : a.hyperparams) out << "hyper " << k << ' ' << v << '\n';
    out << "params\n";

    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, LinearModel<float>>) {
                out << "shape " << m.weights.rows() << ' ' << m.weights.cols() << '\n';
                detail::write_array(out, "weights", m.weights.data());
                detail::write_array(out, "biases", m.biases);
            } else if constexpr (std::is_same_v<M, GaussianNBModel<float>>) {
                out << "shape " << m.means.rows() << ' ' << m.means.cols() << '\n';
                detail::write_array(out, "means", m.means.data());
                detail::write_array(out, "variances", m.variances.data());
                detail::write_array(out, "log_priors", m.log_priors);
            } else if constexpr (std::is_same_v<M, BinaryRelevanceGNB<float>>) {
                out << "shape " << m.per_label.size() << '\n';
                for (std::size_t c = 0; c < m.per_label.size(); ++c) {
                    const auto& sub = m.per_label[c];
                    out << "shape " << sub.means.rows() << ' ' << sub.means.cols() << '\n';
                    std::string tag = std::to_string(c);
                    detail::write_array(out, "means" + tag, sub.means.data());
                    detail::write_array(out, "variances" + tag, sub.variances.data());
                    detail::write_array(out, "log_priors" + tag, sub.log_priors);
                }
            } else if constexpr (std::is_same_v<M, KNNModel<float>>) {
                out << "shape " << m.stored_inputs.size() << ' ' << m.input_dim() << ' ' << m.k
                    << '\n';
                std::vector<float> all;
                all.reserve(m.stored_inputs.size() * m.input_dim());
                for (const auto& row : m.stored_inputs) all.insert(all.end(), row.begin(), row.end());
                detail::write_array(out, "inputs", all);
                detail::write_label_array(out, "labels", m.stored_labels);
            } else if constexpr (std::is_same_v<M, MLPModel<float>>) {
                out << "shape " << m.input_dim << ' ' << m.hidden << '\n';
                detail::write_array(out, "theta", m.theta);
            } else if constexpr (std::is_same_v<M, ConvModel<float>>) {
                out << "shape " << m.filters;
                for (std::size_t w : m.widths) out << ' ' << w;
                out << '\n';
                detail::write_array(out, "theta", m.theta);
            } else if constexpr (std::is_same_v<M, LSTMModel<float>>) {
                out << "shape " << m.hidden << '\n';
                detail::write_array(out, "theta", m.theta);
            }
        },
        a.model);
}

inline ModelArtifact load_model(const std::string& path) {
    detail::ArtifactReader reader(path);
    ModelArtifact a;
    {
        std::istringstream magic(reader.next_line());
        std::string kw;
        int version = 0;
        magic >> kw >> version;
        if (kw != "affectmodel" || version != ModelArtifact::kFormatVersion) {
            throw_config("'" + path + "' is not an affectmodel v" +
                         std::to_string(ModelArtifact::kFormatVersion) + " file");
        }
    }
    std::string family_name;
    while (true) {
        std::string line = reader.next_line();
        if (line == "params") break;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "family") {
            ls >> family_name;
        } else if (key == "task") {
            ls >> a.task_id;
        } else if (key == "embedding") {
            ls >> a.embedding_name;
        } else if (key == "dim") {
            ls >> a.dim;
        } else if (key == "max_len") {
            ls >> a.max_len;
        } else if (key == "classes") {
            ls >> a.n_classes;
        } else if (key == "multi_label") {
            int b = 0;
            ls >> b;
            a.multi_label = b != 0;
        } else if (key == "hyper") {
            std::string k, v;
            ls >> k;
            std::getline(ls, v);
            if (!v.empty() && v.front() == ' ') v.erase(0, 1);
            a.hyperparams[k] = v;
        } else {
            throw_config("model file '" + path + "': unknown header key '" + key + "'");
        }
    }
    a.family = family_from_string(family_name);

    auto read_shape = [&](std::size_t count) {
        std::istringstream ls(reader.next_line());
        std::string kw;
        ls >> kw;
        if (kw != "shape") throw_config("model file '" + path + "': expected shape line");
        std::vector<std::size_t> dims(count);
        for (auto& d : dims) ls >> d;
        return dims;
    };

    switch (a.family) {
        case Family::ovr:
        case Family::svm: {
            auto dims = read_shape(2);
            LinearModel<float> m;
            std::vector<float> w = reader.read_array("weights");
            m.weights = Matrix<float>(dims[0], dims[1]);
            std::copy(w.begin(), w.end(), m.weights.data().begin());
            m.biases = reader.read_array("biases");
            m.multi_label = a.multi_label;
            a.model = std::move(m);
            break;
        }
        case Family::nb: {
            if (!a.multi_label) {
                auto dims = read_shape(2);
                GaussianNBModel<float> m;
                std::vector<float> mu = reader.read_array("means");
                m.means = Matrix<float>(dims[0], dims[1]);
                std::copy(mu.begin(), mu.end(), m.means.data().begin());
                std::vector<float> var = reader.read_array("variances");
                m.variances = Matrix<float>(dims[0], dims[1]);
                std::copy(var.begin(), var.end(), m.variances.data().begin());
                m.log_priors = reader.read_array("log_priors");
                a.model = std::move(m);
            } else {
                auto outer = read_shape(1);
                BinaryRelevanceGNB<float> m;
                m.per_label.resize(outer[0]);
                for (std::size_t c = 0; c < outer[0]; ++c) {
                    auto dims = read_shape(2);
                    std::string tag = std::to_string(c);
                    auto& sub = m.per_label[c];
                    std::vector<float> mu = reader.read_array("means" + tag);
                    sub.means = Matrix<float>(dims[0], dims[1]);
                    std::copy(mu.begin(), mu.end(), sub.means.data().begin());
                    std::vector<float> var = reader.read_array("variances" + tag);
                    sub.variances = Matrix<float>(dims[0], dims[1]);
                    std::copy(var.begin(), var.end(), sub.variances.data().begin());
                    sub.log_priors = reader.read_array("log_priors" + tag);
                }
                a.model = std::move(m);
            }
            break;
        }
        case Family::knn: {
            auto dims = read_shape(3);
            KNNModel<float> m;
            std::vector<float> all = reader.read_array("inputs");
            m.stored_inputs.resize(dims[0]);
            for (std::size_t i = 0; i < dims[0]; ++i) {
                m.stored_inputs[i].assign(all.begin() + static_cast<std::ptrdiff_t>(i * dims[1]),
                                          all.begin() +
                                              static_cast<std::ptrdiff_t>((i + 1) * dims[1]));
            }
            m.stored_labels = reader.read_labels("labels");
            m.n_classes = a.n_classes;
            m.k = dims[2];
            m.multi_label = a.multi_label;
            a.model = std::move(m);
            break;
        }
        case Family::mlp: {
            auto dims = read_shape(2);
            MLPModel<float> m;
            m.input_dim = dims[0];
            m.hidden = dims[1];
            m.n_classes = a.n_classes;
            m.multi_label = a.multi_label;
            m.theta = reader.read_array("theta");
            if (m.theta.size() != m.param_count()) {
                throw_config("model file '" + path + "': MLP parameter count mismatch");
            }
            a.model = std::move(m);
            break;
        }
        case Family::cnn: {
            std::istringstream ls(reader.next_line());
            std::string kw;
            ls >> kw;
            if (kw != "shape") throw_config("model file '" + path + "': expected shape line");
            ConvModel<float> m;
            ls >> m.filters;
            std::size_t w;
            while (ls >> w) m.widths.push_back(w);
            m.max_len = a.max_len;
            m.dim = a.dim;
            m.n_classes = a.n_classes;
            m.multi_label = a.multi_label;
            m.theta = reader.read_array("theta");
            if (m.theta.size() != m.param_count()) {
                throw_config("model file '" + path + "': CNN parameter count mismatch");
            }
            a.model = std::move(m);
            break;
        }
        case Family::lstm: {
            auto dims = read_shape(1);
            LSTMModel<float> m;
            m.max_len = a.max_len;
            m.dim = a.dim;
            m.hidden = dims[0];
            m.n_classes = a.n_classes;
            m.multi_label = a.multi_label;
            m.theta = reader.read_array("theta");
            if (m.theta.size() != m.param_count()) {
                throw_config("model file '" + path + "': LSTM parameter count mismatch");
            }
            a.model = std::move(m);
            break;
        }
    }
    return a;
}

inline std::size_t ModelArtifact::predict_class(const std::vector<float>& flat,
                                                const Matrix<float>& seq) const {
    return std::visit(
        [&](const auto& m) -> std::size_t {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, LinearModel<float>>) {
                return predict_linear_class(m, std::span<const float>(flat));
            } else if constexpr (std::is_same_v<M, GaussianNBModel<float>>) {
                return predict_gnb(m, std::span<const float>(flat));
            } else if constexpr (std::is_same_v<M, KNNModel<float>>) {
                return predict_knn(m, std::span<const float>(flat));
            } else if constexpr (std::is_same_v<M, MLPModel<float>>) {
                std::vector<float> p = m.predict_proba(std::span<const float>(flat));
                std::vector<double> d(p.begin(), p.end());
                return argmax_lowest_tie(std::span<const double>(d));
            } else if constexpr (std::is_same_v<M, ConvModel<float>> ||
                                 std::is_same_v<M, LSTMModel<float>>) {
                std::vector<float> p = m.predict_proba(seq);
                std::vector<double> d(p.begin(), p.end());
                return argmax_lowest_tie(std::span<const double>(d));
            } else {
                throw_data("model family does not support multiclass prediction");
            }
        },
        model);
}

inline std::vector<std::uint8_t> ModelArtifact::predict_labels(const std::vector<float>& flat,
                                                               const Matrix<float>& seq) const {
    return std::visit(
        [&](const auto& m) -> std::vector<std::uint8_t> {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, LinearModel<float>>) {
                return predict_linear_labels(m, std::span<const float>(flat));
            } else if constexpr (std::is_same_v<M, BinaryRelevanceGNB<float>>) {
                return predict_gnb_labels(m, std::span<const float>(flat));
            } else if constexpr (std::is_same_v<M, KNNModel<float>>) {
                return predict_knn_labels(m, std::span<const float>(flat));
            } else if constexpr (std::is_same_v<M, MLPModel<float>>) {
                std::vector<float> p = m.predict_proba(std::span<const float>(flat));
                std::vector<std::uint8_t> bits(p.size());
                for (std::size_t c = 0; c < p.size(); ++c) bits[c] = p[c] > 0.5f ? 1 : 0;
                return bits;
            } else if constexpr (std::is_same_v<M, ConvModel<float>> ||
                                 std::is_same_v<M, LSTMModel<float>>) {
                std::vector<float> p = m.predict_proba(seq);
                std::vector<std::uint8_t> bits(p.size());
                for (std::size_t c = 0; c < p.size(); ++c) bits[c] = p[c] > 0.5f ? 1 : 0;
                return bits;
            } else {
                throw_data("model family does not support multi-label prediction");
            }
        },
        model);
}

// Family dispatch used by the grid and the train command.
inline ModelArtifact train_model(Family family, const LabeledDataset<float>& ds,
                                 const TrainConfig& cfg, const TaskSpec& task,
                                 const std::string& embedding_name, std::size_t dim,
                                 std::size_t max_len) {
    ModelArtifact a;
    a.family = family;
    a.task_id = task.id;
    a.embedding_name = embedding_name;
    a.dim = dim;
    a.max_len = max_len;
    a.n_classes = ds.n_classes; // the trained head width, not the nominal task width
    a.multi_label = ds.multi_label;
    a.hyperparams["learning_rate"] = std::to_string(cfg.learning_rate);
    a.hyperparams["epochs"] = std::to_string(cfg.epochs);
    a.hyperparams["l2"] = std::to_string(cfg.l2);
    a.hyperparams["seed"] = std::to_string(cfg.seed);
    a.hyperparams["batch_size"] = std::to_string(cfg.batch_size);

    switch (family) {
        case Family::ovr:
        case Family::svm:
            a.model = train_ovr_linear(ds, cfg);
            break;
        case Family::nb:
            if (task.multi_label) {
                a.model = train_gnb_multilabel(ds, cfg.variance_floor);
            } else {
                a.model = train_gnb(ds, cfg.variance_floor);
            }
            break;
        case Family::knn:
            a.hyperparams["k"] = std::to_string(cfg.knn_k);
            a.model = train_knn(ds, cfg.knn_k);
            break;
        case Family::mlp:
            a.hyperparams["hidden"] = std::to_string(cfg.hidden);
            a.model = train_mlp(ds, cfg);
            break;
        case Family::cnn: {
            a.hyperparams["filters"] = std::to_string(cfg.filters);
            a.hyperparams["dropout"] = std::to_string(cfg.dropout);
            a.model = train_cnn(ds, cfg);
            break;
        }
        case Family::lstm:
            a.hyperparams["hidden"] = std::to_string(cfg.hidden);
            a.model = train_lstm(ds, cfg);
            break;
    }
    return a;
}

} // namespace affect
