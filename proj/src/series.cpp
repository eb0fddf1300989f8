#include "splitkit/series.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

namespace splitkit {

// ---------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::vector<Generator> generators) : gens_(std::move(generators))
{
    std::sort(gens_.begin(), gens_.end(),
              [](const Generator &a, const Generator &b) { return a.name < b.name; });
    std::set<std::string> names;
    for (const auto &g : gens_) {
        if (g.grade < 1)
            throw std::invalid_argument("Alphabet: generator '" + g.name + "' has grade < 1");
        if (g.name.empty())
            throw std::invalid_argument("Alphabet: empty generator name");
        if (!names.insert(g.name).second)
            throw std::invalid_argument("Alphabet: duplicate generator name '" + g.name + "'");
    }
    if (gens_.size() > 255)
        throw std::invalid_argument("Alphabet: too many generators");
}

const Alphabet &Alphabet::ab()
{
    static const Alphabet a({{"A", 1}, {"B", 1}});
    return a;
}

const Alphabet &Alphabet::k1()
{
    static const Alphabet a({{"H0", 1}, {"H1", 2}});
    return a;
}

const Alphabet &Alphabet::k2()
{
    static const Alphabet a({{"H0", 1}, {"H1", 2}, {"H2", 3}});
    return a;
}

int Alphabet::index_of(std::string_view name) const
{
    for (size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name)
            return static_cast<int>(i);
    return -1;
}

// ---------------------------------------------------------------------------
// WordTable

int WordTable::degree_cap(const Alphabet &alphabet)
{
    for (const auto &g : alphabet.generators())
        if (g.grade > 1)
            return 11; // graded alphabets grow slowly (Fibonacci-like)
    return 10; // two grade-1 letters: 2^(N+1) words
}

namespace {

std::string letters_key(const std::vector<std::uint8_t> &letters)
{
    return std::string(letters.begin(), letters.end());
}

void enumerate_rec(const Alphabet &alphabet, int max_degree, std::vector<std::uint8_t> &cur,
                   int cur_degree, std::vector<Word> &out)
{
    out.push_back(Word{cur, cur_degree});
    for (int l = 0; l < alphabet.size(); ++l) {
        int g = alphabet[l].grade;
        if (cur_degree + g > max_degree)
            continue;
        cur.push_back(static_cast<std::uint8_t>(l));
        enumerate_rec(alphabet, max_degree, cur, cur_degree + g, out);
        cur.pop_back();
    }
}

} // namespace

WordTable::WordTable(const Alphabet &alphabet, int max_degree)
    : alphabet_(alphabet), max_degree_(max_degree)
{
    std::vector<std::uint8_t> cur;
    enumerate_rec(alphabet_, max_degree_, cur, 0, words_);
    std::sort(words_.begin(), words_.end(), [](const Word &a, const Word &b) {
        if (a.degree != b.degree)
            return a.degree < b.degree;
        return a.letters < b.letters; // alphabet is name-sorted, so index order is name order
    });

    degree_offsets_.assign(static_cast<size_t>(max_degree_) + 2, 0);
    for (size_t i = 0; i < words_.size(); ++i)
        degree_offsets_[static_cast<size_t>(words_[i].degree) + 1] =
            static_cast<int>(i) + 1;
    for (size_t d = 1; d < degree_offsets_.size(); ++d)
        degree_offsets_[d] = std::max(degree_offsets_[d], degree_offsets_[d - 1]);

    std::map<std::string, int> index;
    for (size_t i = 0; i < words_.size(); ++i)
        index[letters_key(words_[i].letters)] = static_cast<int>(i);

    const size_t n = words_.size();
    concat_.assign(n * n, -1);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (words_[i].degree + words_[j].degree > max_degree_)
                continue;
            std::vector<std::uint8_t> cat = words_[i].letters;
            cat.insert(cat.end(), words_[j].letters.begin(), words_[j].letters.end());
            concat_[i * n + j] = index.at(letters_key(cat));
        }
    }
}

WordTablePtr WordTable::get(const Alphabet &alphabet, int max_degree)
{
    if (max_degree < 0)
        throw std::invalid_argument("WordTable: negative max_degree");
    if (alphabet.size() == 0 && max_degree > 0)
        throw std::invalid_argument("WordTable: empty alphabet with max_degree > 0");
    if (max_degree > degree_cap(alphabet))
        throw std::invalid_argument("WordTable: max_degree " + std::to_string(max_degree)
                                    + " exceeds cap " + std::to_string(degree_cap(alphabet)));

    struct Key {
        std::string alpha;
        int degree;
        bool operator<(const Key &o) const
        {
            return std::tie(alpha, degree) < std::tie(o.alpha, o.degree);
        }
    };
    static std::mutex mtx;
    static std::map<Key, WordTablePtr> cache;

    std::string alpha_key;
    for (const auto &g : alphabet.generators())
        alpha_key += g.name + ":" + std::to_string(g.grade) + ";";

    std::lock_guard<std::mutex> lock(mtx);
    auto &slot = cache[Key{alpha_key, max_degree}];
    if (!slot)
        slot = WordTablePtr(new WordTable(alphabet, max_degree));
    return slot;
}

int WordTable::index_of(const Word &w) const
{
    if (w.degree > max_degree_)
        return -1;
    auto lo = words_.begin() + degree_offsets_[static_cast<size_t>(w.degree)];
    auto hi = words_.begin() + degree_offsets_[static_cast<size_t>(w.degree) + 1];
    auto it = std::lower_bound(lo, hi, w.letters,
                               [](const Word &a, const std::vector<std::uint8_t> &key) {
                                   return a.letters < key;
                               });
    if (it == hi || it->letters != w.letters)
        return -1;
    return static_cast<int>(it - words_.begin());
}

int WordTable::first_index_of_degree(int d) const
{
    if (d < 0 || d > max_degree_)
        return word_count();
    return degree_offsets_[static_cast<size_t>(d)];
}

std::string WordTable::word_name(int idx) const
{
    const Word &w = words_[static_cast<size_t>(idx)];
    if (w.letters.empty())
        return "1";
    std::string s;
    for (auto l : w.letters)
        s += alphabet_[l].name;
    return s;
}

std::vector<Word> enumerate_words(const Alphabet &alphabet, int max_degree)
{
    if (alphabet.size() == 0 && max_degree == 0)
        return {Word{}}; // just the empty word; no table needed
    auto t = WordTable::get(alphabet, max_degree);
    std::vector<Word> out;
    out.reserve(static_cast<size_t>(t->word_count()));
    for (int i = 0; i < t->word_count(); ++i)
        out.push_back(t->word(i));
    return out;
}

// ---------------------------------------------------------------------------
// BasicSeries

namespace {

template <class R> bool coeff_is_zero(const R &v) { return v == 0; }

} // namespace

template <class R>
BasicSeries<R>::BasicSeries(WordTablePtr table) : table_(std::move(table))
{
    if (!table_)
        throw std::invalid_argument("BasicSeries: null table");
}

template <class R>
BasicSeries<R> BasicSeries<R>::constant(WordTablePtr table, const R &value)
{
    BasicSeries s(std::move(table));
    if (!coeff_is_zero(value))
        s.terms_.push_back({0, value});
    return s;
}

template <class R>
BasicSeries<R> BasicSeries<R>::generator_term(WordTablePtr table, int letter, const R &coeff)
{
    BasicSeries s(std::move(table));
    if (letter < 0 || letter >= s.table_->alphabet().size())
        throw std::invalid_argument("generator_term: letter out of range");
    if (coeff_is_zero(coeff))
        return s;
    Word w;
    w.letters.push_back(static_cast<std::uint8_t>(letter));
    w.degree = s.table_->alphabet()[letter].grade;
    int idx = s.table_->index_of(w);
    if (idx < 0)
        throw std::invalid_argument("generator_term: grade exceeds table max_degree");
    s.terms_.push_back({idx, coeff});
    return s;
}

template <class R> R BasicSeries<R>::coeff(int word_idx) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), word_idx,
                               [](const Term &t, int idx) { return t.first < idx; });
    if (it == terms_.end() || it->first != word_idx)
        return R(0);
    return it->second;
}

template <class R> void BasicSeries<R>::set_coeff(int word_idx, const R &value)
{
    if (word_idx < 0 || word_idx >= table_->word_count())
        throw std::invalid_argument("set_coeff: word index out of range");
    auto it = std::lower_bound(terms_.begin(), terms_.end(), word_idx,
                               [](const Term &t, int idx) { return t.first < idx; });
    if (it != terms_.end() && it->first == word_idx) {
        if (coeff_is_zero(value))
            terms_.erase(it);
        else
            it->second = value;
    } else if (!coeff_is_zero(value)) {
        terms_.insert(it, {word_idx, value});
    }
}

template <class R> int BasicSeries<R>::min_degree() const
{
    if (terms_.empty())
        return table_->max_degree() + 1;
    int d = table_->max_degree() + 1;
    for (const auto &[idx, c] : terms_)
        d = std::min(d, table_->degree(idx));
    return d;
}

template <class R> BasicSeries<R> BasicSeries<R>::degree_part(int degree) const
{
    BasicSeries out(table_);
    for (const auto &t : terms_)
        if (table_->degree(t.first) == degree)
            out.terms_.push_back(t);
    return out;
}

template <class R> void BasicSeries<R>::prune()
{
    terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                [](const Term &t) { return coeff_is_zero(t.second); }),
                 terms_.end());
}

template <class R>
void BasicSeries<R>::require_compatible(const BasicSeries &a, const BasicSeries &b)
{
    if (a.table_ == b.table_)
        return;
    if (a.table_->alphabet() != b.table_->alphabet()
        || a.table_->max_degree() != b.table_->max_degree())
        throw std::invalid_argument("series operands have mismatched alphabet or truncation");
}

template <class R> BasicSeries<R> &BasicSeries<R>::operator+=(const BasicSeries &rhs)
{
    require_compatible(*this, rhs);
    std::vector<Term> merged;
    merged.reserve(terms_.size() + rhs.terms_.size());
    auto a = terms_.begin(), ae = terms_.end();
    auto b = rhs.terms_.begin(), be = rhs.terms_.end();
    while (a != ae || b != be) {
        if (b == be || (a != ae && a->first < b->first)) {
            merged.push_back(*a++);
        } else if (a == ae || b->first < a->first) {
            merged.push_back(*b++);
        } else {
            R sum = a->second + b->second;
            if (!coeff_is_zero(sum))
                merged.push_back({a->first, sum});
            ++a;
            ++b;
        }
    }
    terms_ = std::move(merged);
    return *this;
}

template <class R> BasicSeries<R> &BasicSeries<R>::operator-=(const BasicSeries &rhs)
{
    BasicSeries neg = rhs;
    neg *= R(-1);
    return *this += neg;
}

template <class R> BasicSeries<R> &BasicSeries<R>::operator*=(const R &scalar)
{
    if (coeff_is_zero(scalar)) {
        terms_.clear();
        return *this;
    }
    for (auto &t : terms_)
        t.second = t.second * scalar;
    return *this;
}

template <class R> std::string BasicSeries<R>::str() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[idx, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        std::ostringstream cs;
        cs << c;
        os << cs.str();
        if (idx != 0)
            os << "*" << table_->word_name(idx);
    }
    return os.str();
}

template <class R> BasicSeries<R> mul(const BasicSeries<R> &x, const BasicSeries<R> &y)
{
    BasicSeries<R>::require_compatible(x, y);
    const WordTable &t = *x.table();
    BasicSeries<R> out(x.table());
    if (x.is_zero() || y.is_zero())
        return out;

    std::vector<R> acc(static_cast<size_t>(t.word_count()), R(0));
    std::vector<std::int32_t> touched;
    touched.reserve(64);
    for (const auto &[i, ci] : x.terms()) {
        for (const auto &[j, cj] : y.terms()) {
            int k = t.concat(i, j);
            if (k < 0)
                continue;
            if (coeff_is_zero(acc[static_cast<size_t>(k)]))
                touched.push_back(k);
            acc[static_cast<size_t>(k)] += ci * cj;
        }
    }
    std::sort(touched.begin(), touched.end());
    for (auto k : touched) {
        if (!coeff_is_zero(acc[static_cast<size_t>(k)]))
            out.terms_.push_back({k, std::move(acc[static_cast<size_t>(k)])});
    }
    return out;
}

template <class R>
BasicSeries<R> commutator(const BasicSeries<R> &x, const BasicSeries<R> &y)
{
    return mul(x, y) - mul(y, x);
}

namespace {

template <class R> R divided_by_int(const R &v, long k);

template <> Rational divided_by_int<Rational>(const Rational &v, long k)
{
    return v / Rational(k);
}

template <> double divided_by_int<double>(const double &v, long k)
{
    return v / static_cast<double>(k);
}

} // namespace

template <class R> BasicSeries<R> exp(const BasicSeries<R> &x)
{
    if (!coeff_is_zero(x.constant_term()))
        throw std::domain_error("exp: nonzero constant term");
    const int n = x.table()->max_degree();
    const int d = x.min_degree();
    BasicSeries<R> result = BasicSeries<R>::constant(x.table(), R(1));
    if (x.is_zero())
        return result;
    BasicSeries<R> term = BasicSeries<R>::constant(x.table(), R(1));
    const int kmax = n / d;
    for (int k = 1; k <= kmax; ++k) {
        term = mul(term, x);
        term *= divided_by_int(R(1), k);
        if (term.is_zero())
            break;
        result += term;
    }
    return result;
}

template <class R> BasicSeries<R> log(const BasicSeries<R> &x)
{
    if (!(x.constant_term() == R(1)))
        throw std::domain_error("log: constant term is not 1");
    BasicSeries<R> y = x - BasicSeries<R>::constant(x.table(), R(1));
    const int n = x.table()->max_degree();
    BasicSeries<R> result(x.table());
    if (y.is_zero())
        return result;
    const int d = y.min_degree();
    const int kmax = n / d;
    BasicSeries<R> pow = BasicSeries<R>::constant(x.table(), R(1));
    for (int k = 1; k <= kmax; ++k) {
        pow = mul(pow, y);
        if (pow.is_zero())
            break;
        BasicSeries<R> term = pow;
        term *= divided_by_int(R(k % 2 == 0 ? -1 : 1), k);
        result += term;
    }
    return result;
}

template class BasicSeries<Rational>;
template class BasicSeries<double>;

template BasicSeries<Rational> mul(const BasicSeries<Rational> &, const BasicSeries<Rational> &);
template BasicSeries<double> mul(const BasicSeries<double> &, const BasicSeries<double> &);
template BasicSeries<Rational> commutator(const BasicSeries<Rational> &,
                                          const BasicSeries<Rational> &);
template BasicSeries<double> commutator(const BasicSeries<double> &, const BasicSeries<double> &);
template BasicSeries<Rational> exp(const BasicSeries<Rational> &);
template BasicSeries<double> exp(const BasicSeries<double> &);
template BasicSeries<Rational> log(const BasicSeries<Rational> &);
template BasicSeries<double> log(const BasicSeries<double> &);

} // namespace splitkit
