#include "wo/compress.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>

namespace wo {

namespace {

constexpr long kScanGuard = 2L * 1000 * 1000;

// A strongly convergent run: where it starts, its steps, and (when known)
// its limit term.
struct Run {
    Term source;
    std::shared_ptr<StepStream> stream;
    std::optional<Term> limit;
};

// Steps of `inner` from `base` onward.
class ShiftedStream final : public StepStream {
  public:
    ShiftedStream(std::shared_ptr<StepStream> inner, long base)
        : inner_(std::move(inner)), base_(base) {}
    bool finite() const override { return inner_->finite(); }
    long length() const override { return std::max(0L, inner_->length() - base_); }
    StepDesc step(long i) const override { return inner_->step(base_ + i); }
    bool has_modulus() const override { return inner_->has_modulus(); }
    long modulus(int depth) const override {
        return std::max(0L, inner_->modulus(depth) - base_);
    }

  private:
    std::shared_ptr<StepStream> inner_;
    long base_;
};

class ConcatStream final : public StepStream {
  public:
    ConcatStream(std::vector<StepDesc> head, std::shared_ptr<StepStream> tail)
        : head_(std::move(head)), tail_(std::move(tail)) {}
    bool finite() const override { return tail_->finite(); }
    long length() const override { return static_cast<long>(head_.size()) + tail_->length(); }
    StepDesc step(long i) const override {
        long h = static_cast<long>(head_.size());
        return i < h ? head_[static_cast<size_t>(i)] : tail_->step(i - h);
    }
    bool has_modulus() const override { return tail_->has_modulus(); }
    long modulus(int depth) const override {
        return static_cast<long>(head_.size()) + tail_->modulus(depth);
    }

  private:
    std::vector<StepDesc> head_;
    std::shared_ptr<StepStream> tail_;
};

Term run_prefix(const TRS& trs, const Term& source, const StepStream& stream, long n,
                std::vector<RewriteStep>* out = nullptr) {
    Term cur = source;
    for (long i = 0; i < n; ++i) {
        StepDesc sd = stream.step(i);
        RewriteStep st = make_step(trs, cur, Redex{sd.pos, sd.rule});
        cur = st.target;
        if (out) out->push_back(std::move(st));
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Successor case: pull one trailing step before the tail of an omega run.
// ---------------------------------------------------------------------------

// The relocated tail of a pull: step i of the parent tail yields one copy per
// residual occurrence, enumerated by anti-diagonals (i + o ascending).
class DovetailStream final : public StepStream {
  public:
    DovetailStream(const TRS& trs, std::shared_ptr<StepStream> tail, RewriteStep replayed)
        : trs_(trs), tail_(std::move(tail)), replayed_(std::move(replayed)) {}

    bool finite() const override { return false; }
    long length() const override { throw input_error("dovetail stream has no finite length"); }
    bool has_modulus() const override { return tail_->has_modulus(); }

    StepDesc step(long j) const override {
        for (long t = 0, seen = 0; t < kScanGuard; ++t) {
            for (long i = 0; i <= t; ++i) {
                long o = t - i;
                const auto& res = residuals(i);
                if (o >= static_cast<long>(res.size())) continue;
                if (seen == j) return StepDesc{res[static_cast<size_t>(o)], rule_of(i)};
                ++seen;
            }
        }
        throw budget_error("dovetail stream: no step at this index within the scan guard");
    }

    long modulus(int depth) const override {
        // Residuals lift by at most the replayed pattern depth; every output
        // step at depth <= `depth` therefore stems from a parent index below
        // the parent modulus at depth + pattern slack.
        int slack = trs_.rule(replayed_.redex.rule).pattern_depth;
        long m = tail_->modulus(depth + slack);
        long last = -1, seen = 0;
        long t_max = m;
        for (long i = 0; i < m; ++i)
            t_max = std::max(t_max, i + static_cast<long>(residuals(i).size()));
        for (long t = 0; t <= t_max; ++t) {
            for (long i = 0; i <= t; ++i) {
                long o = t - i;
                const auto& res = residuals(i);
                if (o >= static_cast<long>(res.size())) continue;
                if (i < m) last = seen;
                ++seen;
            }
        }
        return last + 1;
    }

  private:
    const std::vector<Position>& residuals(long i) const {
        auto it = residual_cache_.find(i);
        if (it == residual_cache_.end()) {
            StepDesc sd = tail_->step(i);
            it = residual_cache_.emplace(i, trace_position(trs_, replayed_, sd.pos)).first;
            rule_cache_[i] = sd.rule;
        }
        return it->second;
    }
    const std::string& rule_of(long i) const {
        residuals(i);
        return rule_cache_[i];
    }

    const TRS& trs_;
    std::shared_ptr<StepStream> tail_;
    RewriteStep replayed_;
    mutable std::map<long, std::vector<Position>> residual_cache_;
    mutable std::map<long, std::string> rule_cache_;
};

// Prepend the trailing step `sd` (applied on run.limit) before the tail of
// the run, at the index given by the modulus of hole depth + pattern depth.
Run pull_through(const TRS& trs, const Run& run, const StepDesc& sd) {
    if (!run.limit)
        throw input_error("compress: an omega segment followed by steps must declare its limit");
    const Rule& rule = trs.rule(sd.rule);
    if (run.stream->finite()) {
        std::vector<StepDesc> steps;
        for (long i = 0; i < run.stream->length(); ++i) steps.push_back(run.stream->step(i));
        steps.push_back(sd);
        Term new_limit = apply_redex(trs, *run.limit, Redex{sd.pos, sd.rule});
        return Run{run.source, finite_steps(std::move(steps)), new_limit};
    }

    int cut = sd.pos.depth() + rule.pattern_depth;
    long n = run.stream->modulus(cut);
    Term s_n = run_prefix(trs, run.source, *run.stream, n);
    // All later steps are below the pattern, so the rule already matches here.
    RewriteStep replayed = make_step(trs, s_n, Redex{sd.pos, sd.rule});
    Term new_limit = apply_redex(trs, *run.limit, Redex{sd.pos, sd.rule});

    std::vector<StepDesc> head;
    for (long i = 0; i < n; ++i) head.push_back(run.stream->step(i));
    head.push_back(sd);
    auto tail = std::make_shared<ShiftedStream>(run.stream, n);
    auto dovetailed = std::make_shared<DovetailStream>(trs, tail, replayed);
    return Run{run.source, std::make_shared<ConcatStream>(std::move(head), dovetailed),
               new_limit};
}

// ---------------------------------------------------------------------------
// Limit case: flatten omega * omega level by level.
// ---------------------------------------------------------------------------

// Steps are emitted in depth levels: per level, the second run's steps at
// that depth are pulled before the tail of the first, then the prefix of the
// first through its last step at the level is emitted. After level D is
// complete every remaining step is deeper than D.
class MergedStream final : public StepStream {
  public:
    MergedStream(const TRS& trs, Run a, Run b) : trs_(trs), a_(std::move(a)), b_(std::move(b)) {}

    bool finite() const override { return false; }
    long length() const override { throw input_error("merged stream has no finite length"); }
    bool has_modulus() const override { return true; }

    StepDesc step(long j) const override {
        while (static_cast<long>(emitted_.size()) <= j) {
            if (next_level_ > kScanGuard)
                throw budget_error("merged stream: no step at this index within the scan guard");
            ensure_level(next_level_);
        }
        return emitted_[static_cast<size_t>(j)];
    }

    long modulus(int depth) const override {
        while (next_level_ <= depth) ensure_level(next_level_);
        return modulus_at_level_.at(depth);
    }

  private:
    void ensure_level(int level) const {
        // Pull the second run's steps at this level before the first's tail.
        long kb = b_.stream->finite() ? b_.stream->length() : b_.stream->modulus(level);
        long last_b = -1;
        for (long i = 0; i < kb; ++i)
            if (b_.stream->step(i).pos.depth() <= level) last_b = i;
        if (last_b >= 0) {
            for (long i = 0; i <= last_b; ++i) a_ = pull_through(trs_, a_, b_.stream->step(i));
            b_.stream = std::make_shared<ShiftedStream>(b_.stream, last_b + 1);
        }
        // Emit the first run's prefix through its last step at this level.
        long ka = a_.stream->finite() ? a_.stream->length() : a_.stream->modulus(level);
        long last_a = -1;
        for (long i = 0; i < ka; ++i)
            if (a_.stream->step(i).pos.depth() <= level) last_a = i;
        if (last_a >= 0) {
            std::vector<RewriteStep> replay;
            a_.source = run_prefix(trs_, a_.source, *a_.stream, last_a + 1, &replay);
            for (const RewriteStep& st : replay)
                emitted_.push_back(StepDesc{st.redex.pos, st.redex.rule});
            a_.stream = std::make_shared<ShiftedStream>(a_.stream, last_a + 1);
        }
        modulus_at_level_[level] = static_cast<long>(emitted_.size());
        next_level_ = level + 1;
    }

    const TRS& trs_;
    mutable Run a_;
    mutable Run b_;
    mutable std::vector<StepDesc> emitted_;
    mutable std::map<int, long> modulus_at_level_;
    mutable int next_level_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------
// compress
// ---------------------------------------------------------------------------

CompressionReport compress(const TRS& trs, const SegSeq& seq, int d_check) {
    if (!trs.left_linear()) throw input_error("compress: the system must be left-linear");
    if (d_check < 0) throw input_error("compress: negative check depth");

    CompressionReport rep;
    rep.input_order_type = seq.order_type();
    rep.omega_segments_in = seq.omega_segments();
    rep.finite_steps_in = seq.finite_step_count();

    auto min_d = min_step_depth(trs, seq);
    rep.min_depth = min_d.value_or(0);
    rep.steps_at_min_depth_in = min_d ? count_steps_at_depth(trs, seq, *min_d) : 0;

    // Fold the segments left to right; the accumulator is either still
    // finite or an omega run.
    std::optional<Run> acc_run;
    std::vector<StepDesc> acc_steps;
    Term acc_end = seq.source;

    for (const Segment& seg : seq.segments) {
        if (seg.finite()) {
            for (long i = 0; i < seg.steps->length(); ++i) {
                StepDesc sd = seg.steps->step(i);
                if (acc_run) {
                    acc_run = pull_through(trs, *acc_run, sd);
                } else {
                    acc_end = make_step(trs, acc_end, Redex{sd.pos, sd.rule}).target;
                    acc_steps.push_back(sd);
                }
            }
        } else {
            if (!acc_run) {
                acc_run = Run{seq.source,
                              acc_steps.empty()
                                  ? seg.steps
                                  : std::make_shared<ConcatStream>(acc_steps, seg.steps),
                              seg.limit};
                acc_steps.clear();
            } else {
                if (!acc_run->limit)
                    throw input_error(
                        "compress: an omega segment followed by another needs its limit");
                Run b{*acc_run->limit, seg.steps, seg.limit};
                acc_run = Run{acc_run->source,
                              std::make_shared<MergedStream>(trs, *acc_run, b), seg.limit};
            }
        }
    }

    SegSeq out;
    out.source = seq.source;
    if (acc_run) {
        out.segments.push_back(Segment{acc_run->stream, acc_run->limit});
        rep.output_finite = acc_run->stream->finite();
        if (rep.output_finite) rep.output_length = acc_run->stream->length();
    } else {
        out.segments.push_back(Segment{finite_steps(acc_steps), std::nullopt});
        rep.output_finite = true;
        rep.output_length = static_cast<long>(acc_steps.size());
    }
    rep.output = out;

    // Verify the three guarantees: source (by construction), minimal-depth
    // step count, and limit agreement at d_check.
    if (min_d) rep.steps_at_min_depth_out = count_steps_at_depth(trs, out, *min_d);
    rep.limit_agreement_depth = d_check;
    Materialized in_mat = materialize(trs, seq, d_check);
    Materialized out_mat = materialize(trs, out, d_check);
    if (!eq_to_depth(in_mat.end, out_mat.end, d_check))
        throw property_violation("compress: output limit disagrees with the input at depth " +
                                 std::to_string(d_check));
    if (min_d) {
        auto out_min = min_step_depth(trs, out);
        if (!out_min || *out_min < *min_d)
            throw property_violation("compress: a step rose above the input's minimal depth");
        if (*out_min != *min_d || rep.steps_at_min_depth_out != rep.steps_at_min_depth_in)
            throw property_violation("compress: minimal-depth step count not preserved");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// compress_divergent
// ---------------------------------------------------------------------------

DivergentPrefix compress_divergent(const TRS& trs, const SegSeq& seq, long K, int witness_depth) {
    if (!trs.left_linear())
        throw input_error("compress_divergent: the system must be left-linear");
    if (K < 0) throw input_error("compress_divergent: negative prefix length");

    DivergentPrefix out;
    out.witness_depth = witness_depth;

    // Remaining input: a list of runs, the last of which may be divergent.
    std::deque<Run> rem;
    for (const Segment& seg : seq.segments) rem.push_back(Run{Term(), seg.steps, seg.limit});

    Term cur = seq.source;
    long consumed_rounds = 0;
    while (static_cast<long>(out.steps.size()) < K && !rem.empty()) {
        // Locate the next witness-depth step across the remaining runs.
        size_t seg_ix = 0;
        long step_ix = -1;
        for (; seg_ix < rem.size(); ++seg_ix) {
            const Run& r = rem[seg_ix];
            long scan = r.stream->finite()
                            ? r.stream->length()
                            : (r.stream->has_modulus() ? r.stream->modulus(witness_depth)
                                                       : kScanGuard);
            for (long i = 0; i < scan; ++i)
                if (r.stream->step(i).pos.depth() <= witness_depth) {
                    step_ix = i;
                    break;
                }
            if (step_ix >= 0) break;
        }
        if (step_ix < 0) throw budget_error("compress_divergent: witness steps ran out");

        // Compress the prefix through that step to <= omega, emit up to and
        // including its first witness-depth step, keep the rest.
        SegSeq prefix;
        prefix.source = cur;
        for (size_t i = 0; i < seg_ix; ++i)
            prefix.segments.push_back(Segment{rem[i].stream, rem[i].limit});
        std::vector<StepDesc> cut;
        for (long i = 0; i <= step_ix; ++i) cut.push_back(rem[seg_ix].stream->step(i));
        prefix.segments.push_back(Segment{finite_steps(cut), std::nullopt});

        CompressionReport crep = compress(trs, prefix, witness_depth);
        const Segment& cseg = crep.output.segments.front();
        long upto = cseg.steps->finite() ? cseg.steps->length()
                                         : cseg.steps->modulus(witness_depth);
        long first_at_d = -1;
        for (long i = 0; i < upto; ++i)
            if (cseg.steps->step(i).pos.depth() <= witness_depth) {
                first_at_d = i;
                break;
            }
        if (first_at_d < 0)
            throw property_violation("compress_divergent: compressed prefix lost its step");
        std::vector<RewriteStep> replay;
        cur = run_prefix(trs, cur, *cseg.steps, first_at_d + 1, &replay);
        for (RewriteStep& st : replay) {
            out.steps.push_back(std::move(st));
            if (static_cast<long>(out.steps.size()) == K) break;
        }
        ++consumed_rounds;

        // Remainder: the compressed tail, the rest of the cut segment, and
        // the untouched segments after it.
        std::deque<Run> next;
        if (!cseg.steps->finite() || cseg.steps->length() > first_at_d + 1)
            next.push_back(Run{Term(),
                               std::make_shared<ShiftedStream>(cseg.steps, first_at_d + 1),
                               cseg.limit});
        if (rem[seg_ix].stream->finite() ? rem[seg_ix].stream->length() > step_ix + 1 : true)
            next.push_back(Run{Term(),
                               std::make_shared<ShiftedStream>(rem[seg_ix].stream, step_ix + 1),
                               rem[seg_ix].limit});
        for (size_t i = seg_ix + 1; i < rem.size(); ++i) next.push_back(rem[i]);
        rem = std::move(next);
    }

    if (static_cast<long>(out.steps.size()) > K) out.steps.resize(static_cast<size_t>(K));
    for (const RewriteStep& st : out.steps)
        if (st.redex.pos.depth() <= witness_depth) ++out.steps_at_witness_depth;
    out.consumption_ratio =
        out.steps_at_witness_depth == 0
            ? 0.0
            : static_cast<double>(consumed_rounds) / static_cast<double>(out.steps_at_witness_depth);
    return out;
}

}  // namespace wo
