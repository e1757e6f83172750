#include <sponge/dimension.hpp>
#include <sponge/structure.hpp>
#include <sponge/subsystem.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace sponge {

Word decode_word(std::uint64_t code, std::size_t length, std::size_t alphabet) {
    Word w(length);
    for (std::size_t n = length; n-- > 0;) {
        w[n] = static_cast<std::size_t>(code % alphabet);
        code /= alphabet;
    }
    return w;
}

std::uint64_t encode_word(const Word& w, std::size_t alphabet) {
    std::uint64_t code = 0;
    for (std::size_t letter : w) code = code * alphabet + letter;
    return code;
}

Word WordSet::word(std::size_t k) const { return decode_word(codes[k], length, alphabet); }

namespace {

// [k][a]: id of the class of digit a on the first k ordered coordinates
std::vector<std::vector<int>> class_ids(const SpongeTemplate& t, const std::vector<int>& order) {
    const int d = t.dimension();
    std::vector<std::vector<int>> ids(d + 1, std::vector<int>(t.size(), 0));
    for (int k = 0; k < d; ++k) {
        std::map<std::pair<int, int>, int> seen;
        for (std::size_t a = 0; a < t.size(); ++a) {
            auto key = std::make_pair(ids[k][a], t.digit(a)[order[k]]);
            ids[k + 1][a] = seen.emplace(key, static_cast<int>(seen.size())).first->second;
        }
    }
    return ids;
}

int class_count(const std::vector<int>& ids) { return ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1; }

double word_mass(std::uint64_t code, std::size_t length, const std::vector<double>& log_p) {
    const std::size_t n = log_p.size();
    double log_mass = 0.0;
    for (std::size_t k = 0; k < length; ++k) {
        log_mass += log_p[code % n];
        code /= n;
    }
    return std::exp(log_mass);
}

std::vector<double> log_weights(const BernoulliWeights& p) {
    std::vector<double> out;
    for (double v : p.values()) out.push_back(std::log(v));
    return out;
}

// Pattern of a word on the first k ordered coordinates, as a base-`classes` integer.
std::uint64_t pattern_key(std::uint64_t code, std::size_t length, std::size_t alphabet, const std::vector<int>& ids,
                          std::uint64_t classes) {
    std::uint64_t key = 0, scale = 1;
    for (std::size_t n = 0; n < length; ++n) {
        key += scale * static_cast<std::uint64_t>(ids[code % alphabet]);
        scale *= classes;
        code /= alphabet;
    }
    return key;
}

// Product of class masses of the letters: the mass of the cylinder pattern.
double pattern_mass(std::uint64_t code, std::size_t length, std::size_t alphabet, const std::vector<double>& class_mass) {
    double log_mass = 0.0;
    for (std::size_t n = 0; n < length; ++n) {
        log_mass += std::log(class_mass[code % alphabet]);
        code /= alphabet;
    }
    return std::exp(log_mass);
}

void check_positive(const BernoulliWeights& p) {
    if (!p.all_positive()) throw SpongeError(ErrorCode::NonPositiveWeights, "every weight must be positive; mix with uniform first");
}

void check_arity(const SpongeTemplate& t, const BernoulliWeights& p) {
    if (p.size() != t.size()) {
        throw SpongeError(ErrorCode::InvalidWeights,
                          "weights have " + std::to_string(p.size()) + " entries for " + std::to_string(t.size()) + " digits");
    }
}

}  // namespace

TypicalityData typicality_data(const SpongeTemplate& t, const BernoulliWeights& p) {
    check_arity(t, p);
    check_positive(p);
    const int d = t.dimension();
    const std::size_t n = t.size();
    TypicalityData out;
    auto chi = lyapunov_exponents(t, p.values());
    out.order.resize(d);
    std::iota(out.order.begin(), out.order.end(), 0);
    std::stable_sort(out.order.begin(), out.order.end(), [&](int i, int j) { return chi[i] < chi[j]; });

    const auto ids = class_ids(t, out.order);
    out.class_mass.assign(d + 1, std::vector<double>(n, 0.0));
    for (int k = 0; k <= d; ++k) {
        std::vector<double> total(n, 0.0);
        for (std::size_t a = 0; a < n; ++a) total[ids[k][a]] += p[a];
        for (std::size_t a = 0; a < n; ++a) out.class_mass[k][a] = total[ids[k][a]];
    }
    out.neg_log.assign(d, std::vector<double>(n));
    for (int k = 0; k < d; ++k) {
        const int c = out.order[k];
        out.chi.push_back(chi[c]);
        double h = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            out.neg_log[k][a] = -t.map(a, c).log_magnitude();
            h += p[a] * std::log(out.class_mass[k][a] / out.class_mass[k + 1][a]);
        }
        out.entropy.push_back(std::max(0.0, h));
    }
    return out;
}

// ===========================================================================
// Typical words

WordSet typical_words(const SpongeTemplate& t, const BernoulliWeights& p, double eps, int N, std::uint64_t cap) {
    if (N < 1) throw SpongeError(ErrorCode::InvalidArgument, "word length must be positive");
    if (eps < 0.0) throw SpongeError(ErrorCode::InvalidArgument, "eps must be non-negative");
    const auto data = typicality_data(t, p);
    const std::size_t n = t.size();
    const int d = t.dimension();

    std::uint64_t total = 1;
    for (int k = 0; k < N; ++k) {
        if (total > cap / n) {
            throw SpongeError(ErrorCode::EnumerationCapExceeded,
                              std::to_string(n) + "^" + std::to_string(N) + " words exceed the cap of " + std::to_string(cap));
        }
        total *= n;
    }

    // info[k][a]: information the letter carries on coordinate k given the earlier ones
    std::vector<std::vector<double>> info(d, std::vector<double>(n));
    for (int k = 0; k < d; ++k) {
        for (std::size_t a = 0; a < n; ++a) info[k][a] = std::log(data.class_mass[k][a] / data.class_mass[k + 1][a]);
    }
    auto slack = [](double bound) { return 1e-9 * std::max(1.0, std::fabs(bound)); };
    std::vector<double> lyap_lo(d), lyap_hi(d), info_lo(d);
    std::vector<double> step_min(d), step_max(d), info_max(d);
    for (int k = 0; k < d; ++k) {
        lyap_lo[k] = (1 - eps) * N * data.chi[k];
        lyap_hi[k] = (1 + eps) * N * data.chi[k];
        info_lo[k] = (1 - eps) * N * data.entropy[k];
        lyap_lo[k] -= slack(lyap_lo[k]);
        lyap_hi[k] += slack(lyap_hi[k]);
        info_lo[k] -= slack(info_lo[k]);
        step_min[k] = *std::min_element(data.neg_log[k].begin(), data.neg_log[k].end());
        step_max[k] = *std::max_element(data.neg_log[k].begin(), data.neg_log[k].end());
        info_max[k] = *std::max_element(info[k].begin(), info[k].end());
    }
    const auto log_p = log_weights(p);

    WordSet out;
    out.length = static_cast<std::size_t>(N);
    out.alphabet = n;
    // explicit stack; row `depth` holds the partial sums of the first `depth` letters
    std::vector<std::size_t> letter(N + 1, 0);
    std::vector<std::vector<double>> lyap_at(N + 1, std::vector<double>(d, 0.0)), info_at(N + 1, std::vector<double>(d, 0.0));
    std::vector<std::uint64_t> code_at(N + 1, 0);
    std::vector<double> logm_at(N + 1, 0.0);

    auto feasible = [&](int depth) {
        const double rest = N - depth;
        for (int k = 0; k < d; ++k) {
            if (lyap_at[depth][k] + rest * step_min[k] > lyap_hi[k]) return false;
            if (lyap_at[depth][k] + rest * step_max[k] < lyap_lo[k]) return false;
            if (info_at[depth][k] + rest * info_max[k] < info_lo[k]) return false;
        }
        return true;
    };

    if (!feasible(0)) return out;
    int depth = 0;
    letter[0] = 0;
    while (depth >= 0) {
        if (letter[depth] == n) {
            --depth;
            if (depth >= 0) ++letter[depth];
            continue;
        }
        const std::size_t a = letter[depth];
        for (int k = 0; k < d; ++k) {
            lyap_at[depth + 1][k] = lyap_at[depth][k] + data.neg_log[k][a];
            info_at[depth + 1][k] = info_at[depth][k] + info[k][a];
        }
        code_at[depth + 1] = code_at[depth] * n + a;
        logm_at[depth + 1] = logm_at[depth] + log_p[a];
        if (!feasible(depth + 1)) {
            ++letter[depth];
            continue;
        }
        if (depth + 1 == N) {
            out.codes.push_back(code_at[N]);
            out.mass += std::exp(logm_at[N]);
            ++letter[depth];
            continue;
        }
        ++depth;
        letter[depth] = 0;
    }
    return out;
}

// ===========================================================================
// Pruning chain

PruningChain prune_chain(const WordSet& S, const SpongeTemplate& t, const BernoulliWeights& p, double eps) {
    const auto data = typicality_data(t, p);
    const auto ids = class_ids(t, data.order);
    const int d = t.dimension();
    const auto log_p = log_weights(p);
    const std::size_t n = S.alphabet;

    PruningChain out;
    out.sets.push_back(S);
    out.masses.push_back(S.mass);
    for (int i = d; i >= 1; --i) {
        const WordSet& current = out.sets.back();
        const int level = i - 1;  // number of earlier coordinates
        const auto classes = static_cast<std::uint64_t>(std::max(1, class_count(ids[level])));
        std::unordered_map<std::uint64_t, double> group_mass;
        std::vector<std::uint64_t> keys(current.size());
        std::vector<double> masses(current.size());
        for (std::size_t w = 0; w < current.size(); ++w) {
            keys[w] = pattern_key(current.codes[w], S.length, n, ids[level], classes);
            masses[w] = word_mass(current.codes[w], S.length, log_p);
            group_mass[keys[w]] += masses[w];
        }
        WordSet next;
        next.length = S.length;
        next.alphabet = n;
        for (std::size_t w = 0; w < current.size(); ++w) {
            const double threshold = eps * pattern_mass(current.codes[w], S.length, n, data.class_mass[level]);
            if (group_mass[keys[w]] >= threshold) {
                next.codes.push_back(current.codes[w]);
                next.mass += masses[w];
            }
        }
        out.masses.push_back(next.mass);
        out.sets.push_back(std::move(next));
    }
    return out;
}

// ===========================================================================
// Interior word

Word interior_word(const SpongeTemplate& t, int max_len) {
    const int d = t.dimension();
    const std::size_t n = t.size();
    // Whether a word's box touches 0 or 1 in a coordinate depends only on
    // the first letter and on which of 0, 1 the rest of the word touches.
    // Bits 2c and 2c+1 record touching 0 and 1 in coordinate c.
    std::vector<std::vector<std::array<bool, 4>>> hits(n, std::vector<std::array<bool, 4>>(d));
    for (std::size_t a = 0; a < n; ++a) {
        for (int c = 0; c < d; ++c) {
            const auto& f = t.map(a, c);
            const Number at0 = f.apply(Number(0)), at1 = f.apply(Number(1));
            hits[a][c] = {compare(at0, Number(0)) == 0, compare(at1, Number(0)) == 0, compare(at0, Number(1)) == 0,
                          compare(at1, Number(1)) == 0};
        }
    }
    using State = std::uint64_t;
    auto step = [&](std::size_t a, State s) {
        State next = 0;
        for (int c = 0; c < d; ++c) {
            const bool t0 = (s >> (2 * c)) & 1u, t1 = (s >> (2 * c + 1)) & 1u;
            const auto& h = hits[a][c];
            if ((t0 && h[0]) || (t1 && h[1])) next |= State(1) << (2 * c);
            if ((t0 && h[2]) || (t1 && h[3])) next |= State(1) << (2 * c + 1);
        }
        return next;
    };
    const State start = d >= 32 ? ~State(0) : (State(1) << (2 * d)) - 1;

    std::vector<std::set<State>> reach{{start}};
    int length = 0;
    for (int len = 1; len <= max_len; ++len) {
        std::set<State> next;
        for (State s : reach.back()) {
            for (std::size_t a = 0; a < n; ++a) next.insert(step(a, s));
        }
        reach.push_back(std::move(next));
        if (reach.back().count(0)) {
            length = len;
            break;
        }
    }
    if (length == 0) {
        throw SpongeError(ErrorCode::NoInteriorWord, "no word of length at most " + std::to_string(max_len) +
                                                         " maps the cube into its interior");
    }

    // lexicographically first word: pick letters left to right while some
    // suffix state still leads to the interior
    Word tau;
    std::set<State> targets{0};
    for (int pos = 0; pos < length; ++pos) {
        const auto& suffixes = reach[length - 1 - pos];
        for (std::size_t a = 0; a < n; ++a) {
            std::set<State> feeding;
            for (State s : suffixes) {
                if (targets.count(step(a, s))) feeding.insert(s);
            }
            if (!feeding.empty()) {
                tau.push_back(a);
                targets = std::move(feeding);
                break;
            }
        }
    }
    return tau;
}

double delta_bound(double entropy, double chi, double eps, int N, double log_tau_ratio) {
    return ((1 - eps) * N * entropy + std::log(eps)) / ((1 + eps) * N * chi - log_tau_ratio);
}

// ===========================================================================
// Subsystem

SubsystemReport build_subsystem(const SpongeTemplate& t, const BernoulliWeights& p, double eps, int N,
                                const SubsystemOptions& options) {
    check_arity(t, p);
    check_positive(p);
    if (!(eps > 0.0 && eps < 1.0)) throw SpongeError(ErrorCode::InvalidArgument, "eps must lie in (0,1)");
    const int d = t.dimension();
    const std::size_t n = t.size();

    const auto profile = measure_profile(t, p);
    std::vector<std::string> failed;
    if (!profile.distinct_lyapunov) failed.push_back("distinct Lyapunov exponents");
    if (!profile.irreducible_wrt.irreducible) failed.push_back("irreducible measure");
    if (!profile.good) failed.push_back("good measure");
    if (!failed.empty()) {
        std::string msg = "hypotheses violated:";
        for (const auto& f : failed) msg += " " + f + ";";
        msg.pop_back();
        throw SpongeError(ErrorCode::HypothesesViolated, msg);
    }

    SubsystemReport out;
    out.N = N;
    out.eps = eps;
    const auto data = typicality_data(t, p);
    out.order = data.order;
    out.chi = data.chi;
    out.entropy = data.entropy;
    for (int k = 0; k < d; ++k) out.ly_dimension += data.entropy[k] / data.chi[k];
    out.limit = (1 - eps) / (1 + eps) * out.ly_dimension;

    const auto S = typical_words(t, p, eps, N, options.cap);
    out.S_size = S.size();
    out.S_mass = S.mass;
    auto chain = prune_chain(S, t, p, eps);
    for (const auto& set : chain.sets) out.chain_sizes.push_back(set.size());
    out.chain_masses = chain.masses;
    const WordSet& T0 = chain.sets.back();
    if (T0.size() == 0) throw SpongeError(ErrorCode::EmptySubsystem, "every typical word was pruned");
    out.members = T0.codes;

    // class equality and the T0 share inequality, checked literally per class
    const auto ids = class_ids(t, data.order);
    const auto log_p = log_weights(p);
    out.claim_holds = true;
    out.t0_inequality_holds = true;
    for (int i = 1; i <= d; ++i) {
        const int level = i - 1;
        const auto classes = static_cast<std::uint64_t>(std::max(1, class_count(ids[level])));
        const WordSet& Ti = chain.sets[d - i];
        std::map<std::uint64_t, std::vector<std::uint64_t>> in_t0, in_ti;
        std::map<std::uint64_t, double> t0_mass;
        for (auto code : T0.codes) {
            auto key = pattern_key(code, S.length, n, ids[level], classes);
            in_t0[key].push_back(code);
            t0_mass[key] += word_mass(code, S.length, log_p);
        }
        for (auto code : Ti.codes) {
            auto key = pattern_key(code, S.length, n, ids[level], classes);
            if (in_t0.count(key)) in_ti[key].push_back(code);
        }
        for (const auto& [key, members] : in_t0) {
            if (in_ti[key] != members) out.claim_holds = false;
            const double need = eps * pattern_mass(members.front(), S.length, n, data.class_mass[level]);
            if (t0_mass[key] < need * (1 - 1e-9)) out.t0_inequality_holds = false;
        }
    }
    if (!out.claim_holds) out.warnings.push_back("pruned classes differ from the chain classes");
    if (!out.t0_inequality_holds) out.warnings.push_back("a surviving class holds less than an eps share of its cylinder");

    out.tau = options.tau ? *options.tau : interior_word(t, options.tau_max_len);
    if (out.tau.empty()) throw SpongeError(ErrorCode::EmptyWord, "interior word must be non-empty");
    for (std::size_t letter : out.tau) {
        if (letter >= n) throw SpongeError(ErrorCode::InvalidArgument, "interior word uses an unknown digit");
    }
    {
        const Box box = apply_word(t, out.tau);
        for (const auto& iv : box) {
            if (compare(iv.lo, Number(0)) <= 0 || compare(iv.hi, Number(1)) >= 0) {
                throw SpongeError(ErrorCode::InvalidArgument, "interior word image touches the cube boundary");
            }
        }
    }

    // Ψ: one digit per surviving word, coordinate words deduplicated per base
    std::vector<std::vector<Similarity1D>> bases(d);
    std::vector<std::map<std::vector<int>, int>> index(d);
    std::vector<Digit> digits;
    digits.reserve(T0.size());
    Word full(S.length + out.tau.size());
    std::copy(out.tau.begin(), out.tau.end(), full.begin() + static_cast<std::ptrdiff_t>(S.length));
    std::vector<int> coord_word(full.size());
    for (auto code : T0.codes) {
        const Word w = decode_word(code, S.length, n);
        std::copy(w.begin(), w.end(), full.begin());
        Digit digit(d);
        for (int c = 0; c < d; ++c) {
            for (std::size_t k = 0; k < full.size(); ++k) coord_word[k] = t.digit(full[k])[c];
            auto [it, inserted] = index[c].emplace(coord_word, static_cast<int>(bases[c].size()));
            if (inserted) bases[c].push_back(compose_coordinate(t, full, c));
            digit[c] = it->second;
        }
        digits.push_back(std::move(digit));
    }
    out.psi.emplace(std::move(bases), std::move(digits));
    const SpongeTemplate& psi = *out.psi;

    bool clamped = false;
    for (int k = 0; k < d; ++k) {
        double log_tau = 0.0;
        for (std::size_t letter : out.tau) log_tau += t.map(letter, data.order[k]).log_magnitude();
        const double raw = delta_bound(data.entropy[k], data.chi[k], eps, N, log_tau);
        out.delta_raw.push_back(raw);
        out.delta.push_back(std::max(0.0, raw));
        clamped = clamped || raw < 0.0;
        out.delta_sum += out.delta.back();
    }
    if (clamped) out.warnings.push_back("negative dimension bound clamped to 0; N is too small for this eps");

    const auto cls = classify(psi);
    out.strongly_lg = cls.strongly_lg;
    try {
        auto formula = assouad_formula(psi);
        out.formula_lower = formula.lower;
        out.formula_upper = formula.upper;
    } catch (const SpongeError& e) {
        if (e.code() != ErrorCode::NotLalleyGatzouras) throw;
        out.warnings.push_back("subsystem has no contraction ordering; Assouad formula unavailable");
    }

    out.uniformly_irreducible = uniformly_irreducible_bruteforce(psi, partial_order(psi));
    const auto sigma = cls.lg_sigma ? *cls.lg_sigma : data.order;
    const auto fibers = fiber_systems(psi, sigma);
    out.min_fiber_count = static_cast<int>(psi.size());
    for (const auto& level : fibers.levels) {
        for (const auto& [prefix, letters] : level) out.min_fiber_count = std::min(out.min_fiber_count, static_cast<int>(letters.size()));
    }
    out.fiber_criterion = out.min_fiber_count >= 2;
    if (cls.lg_sigma && out.fiber_criterion != out.uniformly_irreducible) {
        out.warnings.push_back("fiber-count criterion disagrees with the definitional irreducibility search");
    }
    if (out.strongly_lg && out.formula_lower) out.lower_bound_holds = *out.formula_lower >= out.delta_sum - 1e-9;
    return out;
}

ConvergenceStudy convergence_study(const SpongeTemplate& t, const BernoulliWeights& p, const std::vector<double>& eps_schedule,
                                   const std::vector<int>& N_schedule, const SubsystemOptions& options) {
    if (eps_schedule.empty() || N_schedule.empty()) throw SpongeError(ErrorCode::InvalidArgument, "schedules must be non-empty");
    for (std::size_t k = 1; k < N_schedule.size(); ++k) {
        if (N_schedule[k] <= N_schedule[k - 1]) throw SpongeError(ErrorCode::InvalidArgument, "N schedule must be ascending");
    }
    ConvergenceStudy out;
    out.ly_dimension = ly_dimension(t, p).dimension;
    SubsystemOptions shared = options;
    // τ does not depend on N or ε
    if (!shared.tau) shared.tau = interior_word(t, options.tau_max_len);
    for (double eps : eps_schedule) {
        for (int N : N_schedule) {
            auto report = build_subsystem(t, p, eps, N, shared);
            out.rows.push_back({eps, N, report.delta_sum, report.formula_lower, report.chain_masses.back(),
                                report.uniformly_irreducible, report.limit});
        }
    }
    return out;
}

}  // namespace sponge
