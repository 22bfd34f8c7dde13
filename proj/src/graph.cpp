#include "maxspec/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <utility>

#include "maxspec/errors.hpp"

namespace maxspec {

namespace {

constexpr auto kUnvisited = static_cast<std::size_t>(-1);

// Iterative Tarjan; returns component id per node (ids in discovery order).
std::vector<std::size_t> tarjan(const SparseMaxMatrix& a, std::size_t& count) {
  const std::size_t n = a.dim();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (node, next edge position)
  std::size_t next_index = 0;
  count = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      const auto row = a.row(v);
      if (pos < row.size()) {
        const std::size_t w = row[pos++].col;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::size_t w = kUnvisited;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != done);
        ++count;
      }
    }
  }
  return comp;
}

}  // namespace

Components strong_components(const SparseMaxMatrix& a) {
  const std::size_t n = a.dim();
  std::size_t count = 0;
  const auto raw = tarjan(a, count);

  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t i = 0; i < n; ++i) members[raw[i]].push_back(i);

  // Class mu must follow every class it has an edge into.
  std::vector<std::vector<std::size_t>> into(count);  // into[nu] = classes with an edge to nu
  std::vector<std::size_t> pending(count, 0);          // distinct out-neighbours not yet placed
  {
    std::vector<std::vector<std::size_t>> out(count);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& e : a.row(i))
        if (raw[i] != raw[e.col]) out[raw[i]].push_back(raw[e.col]);
    for (std::size_t c = 0; c < count; ++c) {
      std::sort(out[c].begin(), out[c].end());
      out[c].erase(std::unique(out[c].begin(), out[c].end()), out[c].end());
      pending[c] = out[c].size();
      for (auto d : out[c]) into[d].push_back(c);
    }
  }

  using Key = std::pair<std::size_t, std::size_t>;  // (min member, raw id)
  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  for (std::size_t c = 0; c < count; ++c)
    if (pending[c] == 0) ready.emplace(members[c].front(), c);

  Components out;
  out.class_of.assign(n, 0);
  while (!ready.empty()) {
    const auto c = ready.top().second;
    ready.pop();
    const std::size_t pos = out.classes.size();
    for (auto i : members[c]) out.class_of[i] = pos;
    bool self_loop = false;
    if (members[c].size() == 1) self_loop = !a.at(members[c][0], members[c][0]).is_zero();
    out.trivial.push_back(members[c].size() == 1 && !self_loop);
    out.classes.push_back(std::move(members[c]));
    for (auto d : into[c])
      if (--pending[d] == 0) ready.emplace(members[d].front(), d);
  }
  return out;
}

std::vector<std::size_t> ancestors(const SparseMaxMatrix& a, std::size_t target) {
  if (target >= a.dim()) throw ValidationError("node index out of range");
  const SparseMaxMatrix t = a.transpose();
  std::vector<bool> seen(a.dim(), false);
  std::vector<std::size_t> todo{target};
  seen[target] = true;
  while (!todo.empty()) {
    const auto v = todo.back();
    todo.pop_back();
    for (const auto& e : t.row(v)) {
      if (!seen[e.col]) {
        seen[e.col] = true;
        todo.push_back(e.col);
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

}  // namespace maxspec
