#include "odirl/types.hpp"

namespace odirl {

std::string_view to_string(Domain d) {
  return d == Domain::kSource ? "source" : "target";
}

Domain domain_from_string(std::string_view s) {
  if (s == "source") return Domain::kSource;
  if (s == "target") return Domain::kTarget;
  throw Error("unknown domain tag '" + std::string(s) + "'");
}

TransitionBatch stack(std::span<const Transition> transitions) {
  TransitionBatch b;
  const auto n = static_cast<Eigen::Index>(transitions.size());
  if (n == 0) return b;
  const auto ds = transitions.front().s.size();
  const auto da = transitions.front().a.size();
  b.s.resize(ds, n);
  b.a.resize(da, n);
  b.s_next.resize(ds, n);
  b.done.resize(transitions.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Transition& t = transitions[static_cast<std::size_t>(i)];
    if (t.s.size() != ds || t.a.size() != da || t.s_next.size() != ds) {
      throw Error("stack: inconsistent transition dimensions");
    }
    b.s.col(i) = t.s;
    b.a.col(i) = t.a;
    b.s_next.col(i) = t.s_next;
    b.done[static_cast<std::size_t>(i)] = t.done ? 1 : 0;
  }
  return b;
}

TransitionBatch stack(std::span<const Trajectory> trajectories) {
  std::vector<Transition> flat;
  for (const auto& traj : trajectories) flat.insert(flat.end(), traj.begin(), traj.end());
  return stack(std::span<const Transition>(flat));
}

Mat vstack(std::initializer_list<const Mat*> blocks) {
  Eigen::Index rows = 0;
  Eigen::Index cols = -1;
  for (const Mat* m : blocks) {
    if (cols >= 0 && m->cols() != cols) throw Error("vstack: column mismatch");
    cols = m->cols();
    rows += m->rows();
  }
  Mat out(rows, cols < 0 ? 0 : cols);
  Eigen::Index r = 0;
  for (const Mat* m : blocks) {
    out.middleRows(r, m->rows()) = *m;
    r += m->rows();
  }
  return out;
}

bool all_finite(const Vec& v) { return v.allFinite(); }
bool all_finite(const Mat& m) { return m.allFinite(); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Rng make_stream(std::uint64_t seed, std::string_view label) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(fnv1a64(label)),
                    static_cast<std::uint32_t>(fnv1a64(label) >> 32)};
  return Rng(seq);
}

}  // namespace odirl
