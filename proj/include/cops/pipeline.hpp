#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cops/association.hpp"
#include "cops/dataset.hpp"
#include "cops/rng.hpp"
#include "cops/text.hpp"
#include "cops/types.hpp"
#include "cops/xml.hpp"

namespace cops {

// One post from the dump. Answers carry the id of their question; questions
// have parent_id -1. Lengths are Unicode character counts of the decoded
// attribute text.
struct RawPost {
    long long id = 0;
    bool is_question = false;
    long long parent_id = -1;
    std::int64_t created = 0;
    long long score = 0;
    long long owner = -1;
    bool has_owner = false;
    long long body_chars = 0;
    long long title_chars = 0;
};

// A timestamped event attached to a post. Favorites come from the votes file
// with day precision; comments carry second precision.
struct RawEvent {
    enum class Kind { comment, favorite };
    Kind kind = Kind::comment;
    long long target = 0;
    std::int64_t created = 0;
};

struct RawUser {
    long long id = 0;
    long long reputation = 0;
    std::int64_t created = 0;
    bool has_created = false;
};

// Everything counted while reading and filtering a dump. Written to the
// ingest log in the order lines() returns.
struct IngestCounters {
    long long posts_rows = 0;
    long long questions_parsed = 0;
    long long answers_parsed = 0;
    long long posts_dropped_missing_required = 0;
    long long answers_dropped_missing_parent = 0;
    long long posts_skipped_other_type = 0;
    long long votes_rows = 0;
    long long favorites_parsed = 0;
    long long votes_skipped_other_type = 0;
    long long votes_dropped_missing_required = 0;
    long long comments_rows = 0;
    long long comments_parsed = 0;
    long long comments_dropped_missing_required = 0;
    long long users_rows = 0;
    long long users_parsed = 0;
    long long users_dropped_missing_required = 0;
    long long questions_dropped_unanswered = 0;
    long long answers_dropped_out_of_window = 0;
    long long answers_dropped_unknown_question = 0;
    long long questions_kept = 0;
    long long answers_kept = 0;
    long long posts_missing_user_record = 0;

    std::vector<std::pair<std::string_view, long long>> lines() const {
        return {{"posts_rows", posts_rows},
                {"questions_parsed", questions_parsed},
                {"answers_parsed", answers_parsed},
                {"posts_dropped_missing_required", posts_dropped_missing_required},
                {"answers_dropped_missing_parent", answers_dropped_missing_parent},
                {"posts_skipped_other_type", posts_skipped_other_type},
                {"votes_rows", votes_rows},
                {"favorites_parsed", favorites_parsed},
                {"votes_skipped_other_type", votes_skipped_other_type},
                {"votes_dropped_missing_required", votes_dropped_missing_required},
                {"comments_rows", comments_rows},
                {"comments_parsed", comments_parsed},
                {"comments_dropped_missing_required", comments_dropped_missing_required},
                {"users_rows", users_rows},
                {"users_parsed", users_parsed},
                {"users_dropped_missing_required", users_dropped_missing_required},
                {"questions_dropped_unanswered", questions_dropped_unanswered},
                {"answers_dropped_out_of_window", answers_dropped_out_of_window},
                {"answers_dropped_unknown_question", answers_dropped_unknown_question},
                {"questions_kept", questions_kept},
                {"answers_kept", answers_kept},
                {"posts_missing_user_record", posts_missing_user_record}};
    }
};

struct RawData {
    std::vector<RawPost> posts;
    std::vector<RawEvent> favorites;
    std::vector<RawEvent> comments;
    std::vector<RawUser> users;
    IngestCounters counters;
};

namespace detail {

// Unicode character count of UTF-8 text: bytes that are not continuations.
inline long long utf8_length(std::string_view s) {
    long long n = 0;
    for (unsigned char b : s)
        if ((b & 0xC0) != 0x80) ++n;
    return n;
}

inline bool parse_digits(std::string_view s, std::size_t pos, std::size_t count, long long& out) {
    if (pos + count > s.size()) return false;
    out = 0;
    for (std::size_t i = 0; i < count; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        out = out * 10 + (c - '0');
    }
    return true;
}

// Parses "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM:SS" timestamps, with an optional
// fractional-second tail that is ignored. Returns seconds since the epoch.
inline std::optional<std::int64_t> parse_timestamp(std::string_view s) {
    long long y, mo, d;
    if (!parse_digits(s, 0, 4, y) || s.size() < 10 || s[4] != '-' || !parse_digits(s, 5, 2, mo) ||
        s[7] != '-' || !parse_digits(s, 8, 2, d))
        return std::nullopt;
    if (mo < 1 || mo > 12 || d < 1 || d > 31) return std::nullopt;

    // Civil date to days since 1970-01-01 (Howard Hinnant's algorithm).
    long long yy = y - (mo <= 2 ? 1 : 0);
    long long era = (yy >= 0 ? yy : yy - 399) / 400;
    long long yoe = yy - era * 400;
    long long doy = (153 * (mo + (mo > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    long long doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    std::int64_t days = era * 146097 + doe - 719468;

    if (s.size() == 10) return days * 86400;
    long long h, mi, sec;
    if (s.size() < 19 || s[10] != 'T' || !parse_digits(s, 11, 2, h) || s[13] != ':' ||
        !parse_digits(s, 14, 2, mi) || s[16] != ':' || !parse_digits(s, 17, 2, sec))
        return std::nullopt;
    if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
    if (s.size() > 19 && s[19] != '.') return std::nullopt;
    return days * 86400 + h * 3600 + mi * 60 + sec;
}

// Day index of a timestamp, rounding toward minus infinity.
inline std::int64_t day_of(std::int64_t ts) {
    return ts >= 0 ? ts / 86400 : (ts - 86399) / 86400;
}

inline std::optional<long long> attr_ll(const XmlRow& row, std::string_view name) {
    const std::string* v = row.find(name);
    long long out;
    if (!v || !parse_ll(*v, out)) return std::nullopt;
    return out;
}

inline std::optional<std::int64_t> attr_ts(const XmlRow& row, std::string_view name) {
    const std::string* v = row.find(name);
    if (!v) return std::nullopt;
    return parse_timestamp(*v);
}

inline std::ifstream open_dump_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dump file: " + path);
    return in;
}

} // namespace detail

// Reads the four dump files. Rows missing a required attribute (or carrying
// one that does not parse) are dropped and counted, never fatal; malformed
// XML is fatal with a byte offset. Unknown attributes are ignored.
inline RawData parse_dump(const std::string& posts_path, const std::string& votes_path,
                          const std::string& comments_path, const std::string& users_path) {
    RawData out;
    IngestCounters& c = out.counters;
    XmlRow row;

    {
        std::ifstream in = detail::open_dump_file(posts_path);
        XmlRowReader reader(in);
        while (reader.next(row)) {
            ++c.posts_rows;
            auto id = detail::attr_ll(row, "Id");
            auto type = detail::attr_ll(row, "PostTypeId");
            auto created = detail::attr_ts(row, "CreationDate");
            auto score = detail::attr_ll(row, "Score");
            if (!id || !type || !created || !score) {
                ++c.posts_dropped_missing_required;
                continue;
            }
            if (*type != 1 && *type != 2) {
                ++c.posts_skipped_other_type;
                continue;
            }
            RawPost p;
            p.id = *id;
            p.is_question = *type == 1;
            p.created = *created;
            p.score = *score;
            if (!p.is_question) {
                auto parent = detail::attr_ll(row, "ParentId");
                if (!parent) {
                    ++c.answers_dropped_missing_parent;
                    continue;
                }
                p.parent_id = *parent;
            }
            if (auto owner = detail::attr_ll(row, "OwnerUserId")) {
                p.owner = *owner;
                p.has_owner = true;
            }
            if (const std::string* body = row.find("Body"))
                p.body_chars = detail::utf8_length(*body);
            if (const std::string* title = row.find("Title"))
                p.title_chars = detail::utf8_length(*title);
            (p.is_question ? c.questions_parsed : c.answers_parsed) += 1;
            out.posts.push_back(p);
        }
    }

    {
        std::ifstream in = detail::open_dump_file(votes_path);
        XmlRowReader reader(in);
        while (reader.next(row)) {
            ++c.votes_rows;
            auto post = detail::attr_ll(row, "PostId");
            auto type = detail::attr_ll(row, "VoteTypeId");
            auto created = detail::attr_ts(row, "CreationDate");
            if (!post || !type || !created) {
                ++c.votes_dropped_missing_required;
                continue;
            }
            if (*type != 5) {
                ++c.votes_skipped_other_type;
                continue;
            }
            ++c.favorites_parsed;
            out.favorites.push_back({RawEvent::Kind::favorite, *post, *created});
        }
    }

    {
        std::ifstream in = detail::open_dump_file(comments_path);
        XmlRowReader reader(in);
        while (reader.next(row)) {
            ++c.comments_rows;
            auto post = detail::attr_ll(row, "PostId");
            auto created = detail::attr_ts(row, "CreationDate");
            if (!post || !created) {
                ++c.comments_dropped_missing_required;
                continue;
            }
            ++c.comments_parsed;
            out.comments.push_back({RawEvent::Kind::comment, *post, *created});
        }
    }

    {
        std::ifstream in = detail::open_dump_file(users_path);
        XmlRowReader reader(in);
        while (reader.next(row)) {
            ++c.users_rows;
            auto id = detail::attr_ll(row, "Id");
            auto rep = detail::attr_ll(row, "Reputation");
            if (!id || !rep) {
                ++c.users_dropped_missing_required;
                continue;
            }
            RawUser u;
            u.id = *id;
            u.reputation = *rep;
            if (auto created = detail::attr_ts(row, "CreationDate")) {
                u.created = *created;
                u.has_created = true;
            }
            ++c.users_parsed;
            out.users.push_back(u);
        }
    }

    return out;
}

// The corpus after window filtering: kept questions with their in-window
// answers, per-question in-window event counts, per-post prior-activity
// counts, and the user table. Everything extract_features needs.
struct PreprocessedCorpus {
    struct Question {
        RawPost post;
        std::vector<Index> answers;
        long long favorites_in_window = 0;
        long long comments_in_window = 0;
        long long prev_questions = 0;
    };
    struct Answer {
        RawPost post;
        Index question = 0;
        long long prev_answers = 0;
    };

    std::vector<Question> questions;
    std::vector<Answer> answers;
    std::unordered_map<long long, const RawUser*> users;
    IngestCounters counters;
};

// Applies the window rule: a question is kept only when at least one of its
// answers falls inside [question time, question time + window]; answers and
// comments outside that range are discarded. Favorites carry day precision,
// so one counts while its date is at most the question's date plus one day.
// Prior-activity counts are taken over the whole parsed corpus, so posts
// dropped later by the window still count as a user's earlier activity.
inline PreprocessedCorpus preprocess(const RawData& raw, int window_hours = 24) {
    if (window_hours <= 0)
        throw std::invalid_argument("preprocess: window must be a positive number of hours");
    const std::int64_t window = static_cast<std::int64_t>(window_hours) * 3600;

    PreprocessedCorpus out;
    out.counters = raw.counters;

    // Strictly-earlier same-kind post counts per owner.
    std::unordered_map<long long, std::vector<std::int64_t>> q_times, a_times;
    for (const RawPost& p : raw.posts) {
        if (!p.has_owner) continue;
        (p.is_question ? q_times : a_times)[p.owner].push_back(p.created);
    }
    for (auto* table : {&q_times, &a_times})
        for (auto& [owner, times] : *table) std::sort(times.begin(), times.end());
    auto earlier = [](const std::unordered_map<long long, std::vector<std::int64_t>>& table,
                      const RawPost& p) -> long long {
        if (!p.has_owner) return 0;
        auto it = table.find(p.owner);
        if (it == table.end()) return 0;
        const auto& times = it->second;
        return std::lower_bound(times.begin(), times.end(), p.created) - times.begin();
    };

    std::unordered_map<long long, std::size_t> question_slot;
    for (std::size_t i = 0; i < raw.posts.size(); ++i) {
        const RawPost& p = raw.posts[i];
        if (!p.is_question) continue;
        if (!question_slot.emplace(p.id, out.questions.size()).second) continue;
        PreprocessedCorpus::Question q;
        q.post = p;
        q.prev_questions = earlier(q_times, p);
        out.questions.push_back(std::move(q));
    }

    // Attach in-window answers; the window is inclusive at both ends.
    std::vector<std::vector<PreprocessedCorpus::Answer>> pending(out.questions.size());
    for (const RawPost& p : raw.posts) {
        if (p.is_question) continue;
        auto it = question_slot.find(p.parent_id);
        if (it == question_slot.end()) {
            ++out.counters.answers_dropped_unknown_question;
            continue;
        }
        const RawPost& q = out.questions[it->second].post;
        if (p.created < q.created || p.created > q.created + window) {
            ++out.counters.answers_dropped_out_of_window;
            continue;
        }
        PreprocessedCorpus::Answer a;
        a.post = p;
        a.prev_answers = earlier(a_times, p);
        pending[it->second].push_back(std::move(a));
    }

    // Compact to answered questions only, preserving parse order on both
    // sides. Answer order follows question order, then parse order within.
    std::vector<PreprocessedCorpus::Question> kept;
    for (std::size_t s = 0; s < out.questions.size(); ++s) {
        if (pending[s].empty()) {
            ++out.counters.questions_dropped_unanswered;
            continue;
        }
        PreprocessedCorpus::Question q = std::move(out.questions[s]);
        for (PreprocessedCorpus::Answer& a : pending[s]) {
            a.question = static_cast<Index>(kept.size());
            q.answers.push_back(static_cast<Index>(out.answers.size()));
            out.answers.push_back(std::move(a));
        }
        kept.push_back(std::move(q));
    }
    out.questions = std::move(kept);

    std::unordered_map<long long, std::size_t> kept_slot;
    for (std::size_t s = 0; s < out.questions.size(); ++s)
        kept_slot.emplace(out.questions[s].post.id, s);

    for (const RawEvent& e : raw.comments) {
        auto it = kept_slot.find(e.target);
        if (it == kept_slot.end()) continue;
        const RawPost& q = out.questions[it->second].post;
        if (e.created >= q.created && e.created <= q.created + window)
            ++out.questions[it->second].comments_in_window;
    }
    for (const RawEvent& e : raw.favorites) {
        auto it = kept_slot.find(e.target);
        if (it == kept_slot.end()) continue;
        const RawPost& q = out.questions[it->second].post;
        if (detail::day_of(e.created) <= detail::day_of(q.created) + 1)
            ++out.questions[it->second].favorites_in_window;
    }

    for (const RawUser& u : raw.users) out.users.emplace(u.id, &u);

    out.counters.questions_kept = static_cast<long long>(out.questions.size());
    out.counters.answers_kept = static_cast<long long>(out.answers.size());
    return out;
}

struct ExtractOptions {
    // When set, a post whose owner's account was created after the post gets
    // reputation 0 instead of the account's dump-time value.
    bool zero_reputation_before_user_creation = false;
};

inline const std::vector<std::string>& question_feature_names() {
    static const std::vector<std::string> names = {
        "reputation",          "prev_questions", "answers_in_window", "favorites_in_window",
        "comments_in_window",  "body_chars",     "title_chars"};
    return names;
}

inline const std::vector<std::string>& answer_feature_names() {
    static const std::vector<std::string> names = {"reputation", "prev_answers",
                                                   "question_comments_in_window", "body_chars"};
    return names;
}

// Builds the numeric dataset from a preprocessed corpus. A post whose owner
// is absent from the user table gets reputation 0; such posts are counted
// into counters->posts_missing_user_record when a counter sink is given.
inline Dataset extract_features(const PreprocessedCorpus& corpus, const ExtractOptions& opts = {},
                                IngestCounters* counters = nullptr) {
    const Index n_q = static_cast<Index>(corpus.questions.size());
    const Index n_a = static_cast<Index>(corpus.answers.size());

    auto reputation = [&](const RawPost& p) -> double {
        const RawUser* u = nullptr;
        if (p.has_owner) {
            auto it = corpus.users.find(p.owner);
            if (it != corpus.users.end()) u = it->second;
        }
        if (!u) {
            if (counters) ++counters->posts_missing_user_record;
            return 0.0;
        }
        if (opts.zero_reputation_before_user_creation && u->has_created &&
            u->created > p.created)
            return 0.0;
        return static_cast<double>(u->reputation);
    };

    Dataset d;
    d.question_features.values.resize(n_q, 7);
    d.question_features.schema = question_feature_names();
    d.question_quality.values.resize(n_q);
    d.question_quality.labeled.assign(static_cast<std::size_t>(n_q), 1);
    d.question_ids.resize(static_cast<std::size_t>(n_q));
    for (Index i = 0; i < n_q; ++i) {
        const auto& q = corpus.questions[static_cast<std::size_t>(i)];
        d.question_features.values(i, 0) = reputation(q.post);
        d.question_features.values(i, 1) = static_cast<double>(q.prev_questions);
        d.question_features.values(i, 2) = static_cast<double>(q.answers.size());
        d.question_features.values(i, 3) = static_cast<double>(q.favorites_in_window);
        d.question_features.values(i, 4) = static_cast<double>(q.comments_in_window);
        d.question_features.values(i, 5) = static_cast<double>(q.post.body_chars);
        d.question_features.values(i, 6) = static_cast<double>(q.post.title_chars);
        d.question_quality.values[i] = static_cast<double>(q.post.score);
        d.question_ids[static_cast<std::size_t>(i)] = q.post.id;
    }

    d.answer_features.values.resize(n_a, 4);
    d.answer_features.schema = answer_feature_names();
    d.answer_quality.values.resize(n_a);
    d.answer_quality.labeled.assign(static_cast<std::size_t>(n_a), 1);
    d.answer_ids.resize(static_cast<std::size_t>(n_a));
    std::vector<Index> question_of(static_cast<std::size_t>(n_a));
    for (Index j = 0; j < n_a; ++j) {
        const auto& a = corpus.answers[static_cast<std::size_t>(j)];
        const auto& q = corpus.questions[static_cast<std::size_t>(a.question)];
        d.answer_features.values(j, 0) = reputation(a.post);
        d.answer_features.values(j, 1) = static_cast<double>(a.prev_answers);
        d.answer_features.values(j, 2) = static_cast<double>(q.comments_in_window);
        d.answer_features.values(j, 3) = static_cast<double>(a.post.body_chars);
        d.answer_quality.values[j] = static_cast<double>(a.post.score);
        d.answer_ids[static_cast<std::size_t>(j)] = a.post.id;
        question_of[static_cast<std::size_t>(j)] = a.question;
    }

    d.association = AssociationMatrix::from_question_of(n_q, question_of);
    d.validate();
    return d;
}

struct RebalanceCounters {
    long long questions_dropped_score0 = 0;
    long long questions_dropped_score1 = 0;
    long long answers_dropped_score0 = 0;
    long long answers_dropped_score1 = 0;
    long long answers_dropped_suspended = 0;
    long long questions_dropped_emptied = 0;

    std::vector<std::pair<std::string_view, long long>> lines() const {
        return {{"rebalance_questions_dropped_score0", questions_dropped_score0},
                {"rebalance_questions_dropped_score1", questions_dropped_score1},
                {"rebalance_answers_dropped_score0", answers_dropped_score0},
                {"rebalance_answers_dropped_score1", answers_dropped_score1},
                {"rebalance_answers_dropped_suspended", answers_dropped_suspended},
                {"rebalance_questions_dropped_emptied", questions_dropped_emptied}};
    }
};

namespace detail {

// Seeded uniform choice of floor(num/den * n) indices out of those in pool.
// Consumes one shuffle from rng; the selection is the shuffled prefix.
inline std::vector<Index> cut_fraction(const std::vector<Index>& pool, long long num,
                                       long long den, Rng& rng) {
    std::vector<Index> shuffled = pool;
    rng.shuffle(shuffled);
    std::size_t k = static_cast<std::size_t>(
        (static_cast<long long>(pool.size()) * num) / den);
    shuffled.resize(k);
    return shuffled;
}

} // namespace detail

// Evens out the score distribution: removes two thirds of the zero-score
// questions, half of the one-score questions, and the same fractions of
// answers, all seeded-uniform with counts rounded down. Answers whose
// question was removed go with it, and a question left with no answers is
// removed in turn. Posts in other score bins survive untouched. The draw
// order is fixed: zero-score questions, one-score questions, zero-score
// answers, one-score answers.
inline Dataset rebalance(const Dataset& d, std::uint64_t seed,
                         RebalanceCounters* counters = nullptr) {
    d.validate();
    Rng rng(seed);

    auto scored = [](const QualityVector& y, double s) {
        std::vector<Index> out;
        for (Index i = 0; i < y.size(); ++i)
            if (y.is_labeled(i) && y.values[i] == s) out.push_back(i);
        return out;
    };

    std::vector<char> q_cut(static_cast<std::size_t>(d.n_questions()), 0);
    std::vector<char> a_cut(static_cast<std::size_t>(d.n_answers()), 0);
    auto q0 = detail::cut_fraction(scored(d.question_quality, 0.0), 2, 3, rng);
    auto q1 = detail::cut_fraction(scored(d.question_quality, 1.0), 1, 2, rng);
    auto a0 = detail::cut_fraction(scored(d.answer_quality, 0.0), 2, 3, rng);
    auto a1 = detail::cut_fraction(scored(d.answer_quality, 1.0), 1, 2, rng);
    for (Index i : q0) q_cut[static_cast<std::size_t>(i)] = 1;
    for (Index i : q1) q_cut[static_cast<std::size_t>(i)] = 1;
    for (Index j : a0) a_cut[static_cast<std::size_t>(j)] = 1;
    for (Index j : a1) a_cut[static_cast<std::size_t>(j)] = 1;
    if (counters) {
        counters->questions_dropped_score0 = static_cast<long long>(q0.size());
        counters->questions_dropped_score1 = static_cast<long long>(q1.size());
        counters->answers_dropped_score0 = static_cast<long long>(a0.size());
        counters->answers_dropped_score1 = static_cast<long long>(a1.size());
    }

    // A question survives when it escaped the cut and keeps at least one
    // answer; an answer survives when it escaped the cut and its question
    // survives. One evaluation reaches the fixed point: the second rule can
    // only remove answers of already-removed questions.
    std::vector<char> q_final(q_cut.size(), 0);
    for (Index i = 0; i < d.n_questions(); ++i) {
        if (q_cut[static_cast<std::size_t>(i)]) continue;
        for (Index j : d.association.answers_of(i)) {
            if (!a_cut[static_cast<std::size_t>(j)]) {
                q_final[static_cast<std::size_t>(i)] = 1;
                break;
            }
        }
        if (counters && !q_final[static_cast<std::size_t>(i)]) ++counters->questions_dropped_emptied;
    }

    std::vector<Index> q_keep, a_keep;
    std::vector<Index> q_new(q_cut.size(), -1);
    for (Index i = 0; i < d.n_questions(); ++i) {
        if (!q_final[static_cast<std::size_t>(i)]) continue;
        q_new[static_cast<std::size_t>(i)] = static_cast<Index>(q_keep.size());
        q_keep.push_back(i);
    }
    for (Index j = 0; j < d.n_answers(); ++j) {
        if (a_cut[static_cast<std::size_t>(j)]) continue;
        if (!q_final[static_cast<std::size_t>(d.association.question_of(j))]) {
            if (counters) ++counters->answers_dropped_suspended;
            continue;
        }
        a_keep.push_back(j);
    }

    Dataset out;
    out.question_features.schema = d.question_features.schema;
    out.answer_features.schema = d.answer_features.schema;
    out.question_features.values.resize(static_cast<Index>(q_keep.size()), d.question_features.values.cols());
    out.question_quality.values.resize(static_cast<Index>(q_keep.size()));
    out.question_quality.labeled.resize(q_keep.size());
    out.question_ids.resize(q_keep.size());
    for (std::size_t r = 0; r < q_keep.size(); ++r) {
        Index i = q_keep[r];
        out.question_features.values.row(static_cast<Index>(r)) = d.question_features.values.row(i);
        out.question_quality.values[static_cast<Index>(r)] = d.question_quality.values[i];
        out.question_quality.labeled[r] = d.question_quality.labeled[static_cast<std::size_t>(i)];
        out.question_ids[r] = d.question_ids[static_cast<std::size_t>(i)];
    }

    out.answer_features.values.resize(static_cast<Index>(a_keep.size()),
                                      d.answer_features.values.cols());
    out.answer_quality.values.resize(static_cast<Index>(a_keep.size()));
    out.answer_quality.labeled.resize(a_keep.size());
    out.answer_ids.resize(a_keep.size());
    std::vector<Index> question_of(a_keep.size());
    for (std::size_t r = 0; r < a_keep.size(); ++r) {
        Index j = a_keep[r];
        out.answer_features.values.row(static_cast<Index>(r)) = d.answer_features.values.row(j);
        out.answer_quality.values[static_cast<Index>(r)] = d.answer_quality.values[j];
        out.answer_quality.labeled[r] = d.answer_quality.labeled[static_cast<std::size_t>(j)];
        out.answer_ids[r] = d.answer_ids[static_cast<std::size_t>(j)];
        question_of[r] = q_new[static_cast<std::size_t>(d.association.question_of(j))];
    }

    out.association =
        AssociationMatrix::from_question_of(static_cast<Index>(q_keep.size()), question_of);
    out.validate();
    return out;
}

} // namespace cops
