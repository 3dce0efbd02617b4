#include "substrata/kernels.hpp"

#include <random>

namespace substrata::kernels {

CylinderIndex::CylinderIndex(std::size_t d, std::size_t K) : d_(d), K_(K) {
  offsets_.push_back(0);
  std::size_t block = 1;
  for (std::size_t k = 1; k <= K; ++k) {
    block *= d;
    if (block > (std::size_t{1} << 24)) throw Error("too many cylinders for a dense index");
    offsets_.push_back(offsets_.back() + block);
  }
}

std::size_t CylinderIndex::code(const char* w, std::size_t len) const {
  std::size_t v = 0;
  for (std::size_t i = 0; i < len; ++i) v = v * d_ + static_cast<unsigned char>(w[i]);
  return offsets_[len - 1] + v;
}

Word CylinderIndex::word(std::size_t code) const {
  std::size_t len = 1;
  while (code >= offsets_[len]) ++len;
  std::size_t v = code - offsets_[len - 1];
  Word w(len, 0);
  for (std::size_t i = len; i-- > 0;) {
    w[i] = static_cast<char>(v % d_);
    v /= d_;
  }
  return w;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

struct ChunkSampler {
  const SamplerInput& in;
  CylinderIndex index;
  std::vector<std::vector<double>> cum;
  std::vector<std::uint32_t> count;
  std::vector<std::size_t> touched;
  std::vector<std::size_t> offset;  // first code of each length
  Word cur, next;

  explicit ChunkSampler(const SamplerInput& input)
      : in(input), index(input.s->size(), input.K), count(index.size(), 0) {
    for (std::size_t k = 1, block = 1, off = 0; k <= in.K; ++k, block *= in.s->size()) {
      offset.push_back(off);
      off += block * in.s->size();
    }
    for (const auto& w : in.weights) {
      std::vector<double> c;
      double acc = 0;
      for (double p : w) c.push_back(acc += p);
      if (!c.empty()) c.back() = 1.0 + 1e-9;  // guard against rounding at the top
      cum.push_back(std::move(c));
    }
  }

  void sample(std::mt19937_64& eng) {
    cur.assign(1, static_cast<char>(in.root));
    for (int l = 0; l < in.level; ++l) {
      next.clear();
      for (char c : cur) {
        const auto a = static_cast<unsigned char>(c);
        const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        const auto& cm = cum[a];
        std::size_t i = 0;
        while (cm[i] <= u) ++i;
        next += in.s->images(a)[i];
      }
      cur.swap(next);
    }
  }

  void accumulate(FrequencySums& acc) {
    const std::size_t n = cur.size();
    const std::size_t d = in.s->size();
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t v = 0;
      for (std::size_t k = 1; k <= in.K; ++k) {
        v = v * d + static_cast<unsigned char>(cur[(i + k - 1) % n]);
        const std::size_t code = offset[k - 1] + v;
        if (count[code]++ == 0) touched.push_back(code);
      }
    }
    acc.n += 1;
    acc.x += n;
    acc.xx += static_cast<std::uint64_t>(n) * n;
    for (std::size_t code : touched) {
      const std::uint64_t y = count[code];
      acc.y[code] += y;
      acc.yy[code] += y * y;
      acc.xy[code] += y * n;
      count[code] = 0;
    }
    touched.clear();
  }

  void run_chunk(std::uint64_t chunk, FrequencySums& acc) {
    std::mt19937_64 eng(splitmix64(in.seed ^ splitmix64(chunk)));
    const std::uint64_t begin = chunk * kChunk;
    const std::uint64_t end = std::min<std::uint64_t>(in.samples, begin + kChunk);
    for (std::uint64_t i = begin; i < end; ++i) {
      sample(eng);
      accumulate(acc);
    }
  }
};

FrequencySums empty_sums(const SamplerInput& in) {
  FrequencySums f;
  const std::size_t size = CylinderIndex(in.s->size(), in.K).size();
  f.y.assign(size, 0);
  f.yy.assign(size, 0);
  f.xy.assign(size, 0);
  return f;
}

void add(FrequencySums& into, const FrequencySums& from) {
  into.n += from.n;
  into.x += from.x;
  into.xx += from.xx;
  for (std::size_t i = 0; i < into.y.size(); ++i) {
    into.y[i] += from.y[i];
    into.yy[i] += from.yy[i];
    into.xy[i] += from.xy[i];
  }
}

std::uint64_t chunk_count(const SamplerInput& in) { return (in.samples + kChunk - 1) / kChunk; }

// ϑ_P(x) restricted to the first |ϑ(x_1)| + K - 1 letters, with the cut
// after the first image kept: column u ↦ Σ P · #{j < |v_1| : w[j..j+K) = u}.
template <class T>
std::map<Word, T> column(const ProbabilityChoice<T>& P, const Word& x, std::size_t K) {
  std::map<Word, T> tail{{Word(), T(1)}};
  for (std::size_t i = 1; i < x.size(); ++i) {
    bool done = true;
    for (const auto& [w, p] : tail) done &= w.size() >= K - 1;
    if (done) break;
    std::map<Word, T> next;
    for (const auto& [w, p] : tail)
      for (const auto& [v, q] : P.rules.at(static_cast<unsigned char>(x[i]))) {
        if (q == 0) continue;
        Word ext = w + v;
        if (ext.size() > K - 1) ext.resize(K - 1);
        next[ext] += p * q;
      }
    tail.swap(next);
  }
  std::map<Word, T> out;
  for (const auto& [v1, p1] : P.rules.at(static_cast<unsigned char>(x[0]))) {
    if (p1 == 0) continue;
    for (const auto& [w, q] : tail) {
      const Word full = v1 + w;
      for (std::size_t j = 0; j < v1.size(); ++j) {
        if (j + K > full.size()) throw Error("parent word too short for the requested cylinder length");
        out[full.substr(j, K)] += p1 * q;
      }
    }
  }
  return out;
}

}  // namespace

namespace serial {

FrequencySums sample_frequencies(const SamplerInput& in) {
  FrequencySums acc = empty_sums(in);
  ChunkSampler sampler(in);
  for (std::uint64_t c = 0; c < chunk_count(in); ++c) sampler.run_chunk(c, acc);
  return acc;
}

template <class T>
std::vector<std::map<Word, T>> transfer_columns(const ProbabilityChoice<T>& P, const std::vector<Word>& parents,
                                                std::size_t K) {
  std::vector<std::map<Word, T>> out;
  out.reserve(parents.size());
  for (const auto& x : parents) out.push_back(column(P, x, K));
  return out;
}

template std::vector<std::map<Word, mpq_class>> transfer_columns(const ProbabilityChoice<mpq_class>&,
                                                                 const std::vector<Word>&, std::size_t);
template std::vector<std::map<Word, double>> transfer_columns(const ProbabilityChoice<double>&,
                                                              const std::vector<Word>&, std::size_t);

}  // namespace serial

namespace omp {

FrequencySums sample_frequencies(const SamplerInput& in) {
  FrequencySums total = empty_sums(in);
  const auto chunks = static_cast<long long>(chunk_count(in));
#pragma omp parallel
  {
    FrequencySums acc = empty_sums(in);
    ChunkSampler sampler(in);
#pragma omp for schedule(dynamic)
    for (long long c = 0; c < chunks; ++c) sampler.run_chunk(static_cast<std::uint64_t>(c), acc);
#pragma omp critical
    add(total, acc);
  }
  return total;
}

template <class T>
std::vector<std::map<Word, T>> transfer_columns(const ProbabilityChoice<T>& P, const std::vector<Word>& parents,
                                                std::size_t K) {
  std::vector<std::map<Word, T>> out(parents.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long long i = 0; i < static_cast<long long>(parents.size()); ++i) out[i] = column(P, parents[i], K);
  return out;
}

template std::vector<std::map<Word, mpq_class>> transfer_columns(const ProbabilityChoice<mpq_class>&,
                                                                 const std::vector<Word>&, std::size_t);
template std::vector<std::map<Word, double>> transfer_columns(const ProbabilityChoice<double>&,
                                                              const std::vector<Word>&, std::size_t);

}  // namespace omp

}  // namespace substrata::kernels
