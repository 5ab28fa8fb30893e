#include "bg/multiindex.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace bg {

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

namespace {

// Recursive: the pattern builders call back into multi_indices/rank.
std::recursive_mutex table_mutex;

std::vector<std::vector<int>> build_multi_indices(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        if (k == 0) break;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

// Sign of the permutation taking (seq) to its sorted order; 0 if repeats.
int sort_sign(std::vector<int> seq) {
    int sign = 1;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j) {
            if (seq[i] == seq[j]) return 0;
            if (seq[i] > seq[j]) sign = -sign;
        }
    return sign;
}

} // namespace

const std::vector<std::vector<int>>& multi_indices(int n, int k) {
    static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
    std::lock_guard<std::recursive_mutex> lock(table_mutex);
    auto key = std::make_pair(n, k);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_multi_indices(n, k)).first;
    return it->second;
}

int multi_index_rank(int n, const std::vector<int>& idx) {
    // Lexicographic rank of a strictly increasing tuple.
    const auto& list = multi_indices(n, static_cast<int>(idx.size()));
    auto it = std::lower_bound(list.begin(), list.end(), idx);
    if (it == list.end() || *it != idx) throw std::invalid_argument("multi_index_rank: bad index");
    return static_cast<int>(it - list.begin());
}

const std::vector<DTerm>& d_pattern(int n, int k) {
    static std::map<std::pair<int, int>, std::vector<DTerm>> cache;
    std::lock_guard<std::recursive_mutex> lock(table_mutex);
    auto key = std::make_pair(n, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<DTerm> pat;
    const auto& out_list = multi_indices(n, k + 1);
    for (int K = 0; K < static_cast<int>(out_list.size()); ++K) {
        const auto& ids = out_list[K];
        for (int p = 0; p <= k; ++p) {
            std::vector<int> rest;
            for (int q = 0; q <= k; ++q)
                if (q != p) rest.push_back(ids[q]);
            int I = (k == 0) ? 0 : multi_index_rank(n, rest);
            pat.push_back({K, I, ids[p], (p % 2 == 0) ? 1 : -1});
        }
    }
    return cache.emplace(key, std::move(pat)).first->second;
}

const std::vector<StarTerm>& flat_star_pattern(int n, int k) {
    static std::map<std::pair<int, int>, std::vector<StarTerm>> cache;
    std::lock_guard<std::recursive_mutex> lock(table_mutex);
    auto key = std::make_pair(n, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<StarTerm> pat;
    const auto& in_list = multi_indices(n, k);
    for (int I = 0; I < static_cast<int>(in_list.size()); ++I) {
        std::vector<bool> used(n, false);
        for (int a : in_list[I]) used[a] = true;
        std::vector<int> comp, perm = in_list[I];
        for (int a = 0; a < n; ++a)
            if (!used[a]) comp.push_back(a);
        perm.insert(perm.end(), comp.begin(), comp.end());
        int out = comp.empty() ? 0 : multi_index_rank(n, comp);
        pat.push_back({out, I, sort_sign(perm)});
    }
    return cache.emplace(key, std::move(pat)).first->second;
}

const std::vector<JTerm>& j_pattern(int n, int k) {
    static std::map<std::pair<int, int>, std::vector<JTerm>> cache;
    std::lock_guard<std::recursive_mutex> lock(table_mutex);
    auto key = std::make_pair(n, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<JTerm> pat;
    const auto& list = multi_indices(n, k);
    for (int I = 0; I < static_cast<int>(list.size()); ++I) {
        const auto& ids = list[I];
        for (int p = 0; p < k; ++p) {
            for (int b = 0; b < n; ++b) {
                std::vector<int> repl = ids;
                repl[p] = b;
                int sign = sort_sign(repl);
                if (sign == 0) continue; // duplicate index: wedge vanishes
                std::vector<int> sorted = repl;
                std::sort(sorted.begin(), sorted.end());
                pat.push_back({multi_index_rank(n, sorted), I, ids[p], b, sign});
            }
        }
    }
    return cache.emplace(key, std::move(pat)).first->second;
}

const std::vector<ITerm>& interior_pattern(int n, int k) {
    static std::map<std::pair<int, int>, std::vector<ITerm>> cache;
    std::lock_guard<std::recursive_mutex> lock(table_mutex);
    auto key = std::make_pair(n, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<ITerm> pat;
    const auto& list = multi_indices(n, k);
    for (int I = 0; I < static_cast<int>(list.size()); ++I) {
        const auto& ids = list[I];
        for (int p = 0; p < k; ++p) {
            std::vector<int> rest;
            for (int q = 0; q < k; ++q)
                if (q != p) rest.push_back(ids[q]);
            int out = (k == 1) ? 0 : multi_index_rank(n, rest);
            pat.push_back({out, I, ids[p], (p % 2 == 0) ? 1 : -1});
        }
    }
    return cache.emplace(key, std::move(pat)).first->second;
}

} // namespace bg
