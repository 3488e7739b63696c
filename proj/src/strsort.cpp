#include "ccs/strsort.hpp"

#include <algorithm>
#include <cassert>

#include "ccs/errors.hpp"
#include "ccs/mathutil.hpp"

namespace ccs {

std::vector<std::vector<uint64_t>> DistStringSet::extract_strings() const {
    std::vector<uint64_t> flat = chars.flatten();
    std::vector<std::vector<uint64_t>> out(lengths.size());
    for (size_t j = 0; j < lengths.size(); ++j)
        out[j].assign(flat.begin() + start_pos[j] - 1, flat.begin() + start_pos[j] - 1 + lengths[j]);
    return out;
}

DistStringSet make_string_set(uint32_t n_nodes, const std::vector<std::vector<uint64_t>>& strings,
                              uint64_t max_total) {
    DistStringSet set;
    std::vector<uint64_t> flat;
    for (const auto& s : strings) {
        if (s.empty()) throw SimError("empty strings are not accepted");
        set.start_pos.push_back(flat.size() + 1);
        set.lengths.push_back(s.size());
        for (uint64_t c : s) {
            if (c == 0) throw SimError("character 0 is reserved");
            flat.push_back(c);
        }
    }
    if (flat.size() > max_total)
        throw SimError("string set of " + std::to_string(flat.size()) + " chars exceeds budget " +
                       std::to_string(max_total));
    set.chars = DistWords::chop(flat, n_nodes);
    return set;
}

std::vector<uint64_t> split_lengths(uint64_t len, uint64_t block) {
    assert(len >= 1 && block >= 1);
    std::vector<uint64_t> out(ceil_div(len, block), block);
    if (len % block != 0) out.back() = len % block;
    return out;
}

BlockTable block_partition(Clique& cq, const DistStringSet& input) {
    const uint32_t n = cq.n();
    const uint64_t b = ipow_ceil(n, 1, 3);
    BlockTable table(n);
    table.block_len = b;

    // each node announces how many strings start in it and how many
    // characters it stores from its last string
    {
        std::vector<uint64_t> starts_in(n, 0);
        for (uint64_t j = 0; j < input.string_count(); ++j)
            starts_in[input.start_node(j)] += 1;
        GenDemand meta(cq.active_nodes());
        uint64_t piece_end = 0;
        for (uint32_t v = 0; v < n; ++v) {
            uint64_t piece_begin = piece_end + 1;
            piece_end += input.chars.piece[v].size();
            uint64_t tail = 0;
            if (piece_end >= piece_begin) {
                // string covering the last character of the piece
                auto it = std::upper_bound(input.start_pos.begin(), input.start_pos.end(), piece_end);
                uint64_t j = uint64_t(it - input.start_pos.begin()) - 1;
                tail = piece_end - std::max(input.start_pos[j], piece_begin) + 1;
            }
            meta.cast(v, 0, n - 1, starts_in[v]);
            meta.cast(v, 0, n - 1, tail);
        }
        cq.gen_route_step(meta);
    }

    // blocks that continue past their start node pull the rest of their
    // characters from the succeeding nodes
    RoutingDemand gather;
    struct PendingBlock {
        uint32_t string_id;
        uint32_t block_index;
        uint32_t node;
        std::vector<uint64_t> local_chars;
        uint64_t expected;
    };
    std::vector<std::vector<PendingBlock>> pending(n);

    for (uint64_t j = 0; j < input.string_count(); ++j) {
        const auto blocks = split_lengths(input.lengths[j], b);
        uint64_t at = input.start_pos[j];
        for (uint32_t k = 0; k < blocks.size(); ++k) {
            auto [v0, off0] = input.chars.locate(at);
            PendingBlock pb{uint32_t(j), k, v0, {}, blocks[k]};
            uint64_t remaining = blocks[k];
            uint64_t cursor = at;
            while (remaining > 0) {
                auto [v, off] = input.chars.locate(cursor);
                uint64_t run = std::min<uint64_t>(remaining, input.chars.piece[v].size() - off);
                if (v == v0) {
                    for (uint64_t x = 0; x < run; ++x)
                        pb.local_chars.push_back(input.chars.piece[v][off + x]);
                } else {
                    std::vector<uint64_t> words(input.chars.piece[v].begin() + off,
                                                input.chars.piece[v].begin() + off + run);
                    gather.send(v, v0, std::move(words));
                }
                remaining -= run;
                cursor += run;
            }
            at += blocks[k];
            pending[v0].push_back(std::move(pb));
        }
    }
    Inboxes boxes = cq.route_step(gather);

    // Remote parts arrive sorted by source node, which equals position
    // order: among the blocks starting at one node only the last can extend
    // past the node's piece, so consuming the inbox sequentially rebuilds
    // every block.
    std::vector<size_t> next_msg(n, 0);
    for (uint32_t v = 0; v < n; ++v) {
        for (PendingBlock& pb : pending[v]) {
            while (pb.local_chars.size() < pb.expected) {
                assert(next_msg[v] < boxes[v].size());
                const Msg& m = boxes[v][next_msg[v]++];
                pb.local_chars.insert(pb.local_chars.end(), m.words.begin(), m.words.end());
            }
            ObjectRecord o;
            o.origin_node = v;
            o.origin_index = uint32_t(table.objects.per_node[v].size());
            o.payload = std::move(pb.local_chars);
            table.objects.per_node[v].push_back(std::move(o));
            table.ident[v].emplace_back(pb.string_id, pb.block_index);
        }
    }
    return table;
}

namespace {

bool all_short(const DistStringSet& s, uint64_t b) {
    for (uint64_t l : s.lengths)
        if (l > b) return false;
    return true;
}

}  // namespace

DistStringSet renaming_pass(Clique& cq, const DistStringSet& input) {
    BlockTable table = block_partition(cq, input);
    auto ranks = solve_object_sort(cq, table.objects, Frac{2, 3}, PayloadOrder::lex_prefix);

    // new string j = sequence of (block rank + 1); each character sits where
    // its block began, so node pieces concatenate in logical order
    DistStringSet out;
    out.lengths.resize(input.string_count());
    for (uint64_t j = 0; j < input.string_count(); ++j)
        out.lengths[j] = ceil_div(input.lengths[j], table.block_len);
    out.start_pos.resize(input.string_count());
    {
        uint64_t pos = 1;
        for (uint64_t j = 0; j < input.string_count(); ++j) {
            out.start_pos[j] = pos;
            pos += out.lengths[j];
        }
    }

    // ident lists are in block-start order per node, and block starts are
    // non-decreasing across nodes, so per-node emission preserves the
    // logical order
    out.chars = DistWords(cq.n());
    std::vector<std::vector<uint64_t>> new_char(input.string_count());
    for (uint64_t j = 0; j < input.string_count(); ++j)
        new_char[j].resize(out.lengths[j]);
    for (uint32_t v = 0; v < cq.n(); ++v)
        for (size_t i = 0; i < table.ident[v].size(); ++i) {
            auto [sid, bidx] = table.ident[v][i];
            new_char[sid][bidx] = ranks[v][i] + 1;
        }
    for (uint32_t v = 0; v < cq.n(); ++v)
        for (size_t i = 0; i < table.ident[v].size(); ++i) {
            auto [sid, bidx] = table.ident[v][i];
            out.chars.piece[v].push_back(new_char[sid][bidx]);
        }
    return out;
}

StringSortResult string_sort(Clique& cq, const DistStringSet& input) {
    const uint64_t b = ipow_ceil(cq.n(), 1, 3);
    StringSortResult result;

    DistStringSet current = input;
    if (!all_short(current, b)) {
        for (int pass = 0; pass < 7; ++pass) {
            current = renaming_pass(cq, current);
            result.passes += 1;
        }
        if (!all_short(current, b)) {
            uint64_t longest = *std::max_element(current.lengths.begin(), current.lengths.end());
            throw PassBudgetExceeded(longest);
        }
    }

    // each shortened string is one block; the final block partition moves it
    // to its start node, which never changed across passes
    BlockTable table = block_partition(cq, current);
    auto ranks = solve_object_sort(cq, table.objects, Frac{2, 3}, PayloadOrder::lex_prefix);

    result.rank.resize(input.string_count());
    result.holder.resize(input.string_count());
    for (uint32_t v = 0; v < cq.n(); ++v)
        for (size_t i = 0; i < table.ident[v].size(); ++i) {
            auto [sid, bidx] = table.ident[v][i];
            assert(bidx == 0);
            result.rank[sid] = ranks[v][i];
            result.holder[sid] = v;
        }
    return result;
}

}  // namespace ccs
