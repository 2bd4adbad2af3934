#include "dkn/error.hpp"
#include "dkn/ingest/csv.hpp"
#include "dkn/ingest/pipeline.hpp"
#include "dkn/numerics/rng.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dkn;

namespace {

Table parse(const std::string& text)
{
    std::istringstream in(text);
    return read_csv(in);
}

Errc code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::InvalidArgument;
}

std::string write_temp(const std::string& name, const std::string& text)
{
    const auto path = std::filesystem::temp_directory_path() / ("dkn_ingest_" + name);
    std::ofstream(path) << text;
    return path.string();
}

const char* kToy = "a,b,mut,y\n"
                   "1.0,2.0,1,0.5\n"
                   "2.0,NA,0,1.5\n"
                   "3.0,1.0,0,2.5\n"
                   "4.0,5.0,1,3.5\n"
                   "5.0,3.0,0,4.5\n";

// Simulated design with strong signals on the first `signals` columns.
Dataset simulated(std::size_t n, std::size_t p, std::size_t signals, double amplitude, std::uint64_t seed)
{
    RngStream s(seed, 0);
    Dataset ds;
    ds.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
        for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
            ds.X(i, j) = s.normal();
        }
    }
    ds.y = Vector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < signals; ++j) {
        ds.y += amplitude * ds.X.col(static_cast<Eigen::Index>(j));
    }
    for (Eigen::Index i = 0; i < ds.y.size(); ++i) {
        ds.y(i) += s.normal();
    }
    for (std::size_t j = 0; j < p; ++j) {
        ds.feature_names.push_back("x" + std::to_string(j + 1));
    }
    ds.response_name = "y";
    return ds;
}

} // namespace

TEST(ReadCsv, QuotesCrlfAndBlankLines)
{
    const Table t = parse("\xEF\xBB\xBF" "name,\"va,l\"\r\n\"x \"\"q\"\"\",1\r\n\r\nz,2\n");
    EXPECT_EQ(t.header, (std::vector<std::string>{"name", "va,l"}));
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0][0], "x \"q\"");
    EXPECT_EQ(t.rows[1][1], "2");
}

TEST(ReadCsv, MalformedInputs)
{
    EXPECT_EQ(code_of([] { parse(""); }), Errc::MalformedCsv);
    EXPECT_EQ(code_of([] { parse("a,a\n1,2\n"); }), Errc::MalformedCsv);
    EXPECT_EQ(code_of([] { parse("a,b\n1\n"); }), Errc::MalformedCsv);
    EXPECT_EQ(code_of([] { parse("a,b\n\"1,2\n"); }), Errc::MalformedCsv);
    EXPECT_EQ(code_of([] { read_csv_file("/nonexistent/file.csv"); }), Errc::FileUnreadable);
}

TEST(CleanTable, MissingRowDroppedAndLogged)
{
    CleaningOptions o;
    o.response = "y";
    o.min_occurrence = 1;
    const Dataset ds = clean_table(parse(kToy), o);
    EXPECT_EQ(ds.X.rows(), 4);
    ASSERT_FALSE(ds.log.empty());
    EXPECT_EQ(ds.log.front(), "drop row 2: missing value");
    EXPECT_EQ(ds.y, (Vector(4) << 0.5, 2.5, 3.5, 4.5).finished());
}

TEST(CleanTable, RareBinaryColumnDropped)
{
    CleaningOptions o;
    o.response = "y";
    const Dataset ds = clean_table(parse(kToy), o);
    EXPECT_EQ(ds.feature_names, (std::vector<std::string>{"a", "b"}));
    bool logged = false;
    for (const auto& line : ds.log) {
        logged = logged || line.find("'mut'") != std::string::npos;
    }
    EXPECT_TRUE(logged);
}

TEST(CleanTable, ZeroVarianceColumnDropped)
{
    CleaningOptions o;
    o.response = "y";
    const Dataset ds = clean_table(parse("c,k,y\n1,7,1\n2,7,2\n3,7,2\n"), o);
    EXPECT_EQ(ds.feature_names, (std::vector<std::string>{"c"}));
}

TEST(CleanTable, StandardizedColumns)
{
    RngStream s(71, 0);
    std::ostringstream csv;
    csv << "u,v,w,y\n";
    for (int i = 0; i < 57; ++i) {
        csv << 3.0 + 10.0 * s.normal() << ',' << s.uniform() << ',' << (i % 4 == 0) << ',' << s.normal() << '\n';
    }
    CleaningOptions o;
    o.response = "y";
    const Dataset ds = clean_table(parse(csv.str()), o);
    ASSERT_EQ(ds.X.cols(), 3);
    const double n = static_cast<double>(ds.X.rows());
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
        const double mean = ds.X.col(j).mean();
        const double var = (ds.X.col(j).array() - mean).square().sum() / (n - 1.0);
        EXPECT_LT(std::abs(mean), 1e-10);
        EXPECT_LT(std::abs(var - 1.0), 1e-8);
    }
    EXPECT_NE(ds.log.back().find("standardize"), std::string::npos);
}

TEST(CleanTable, Idempotent)
{
    CleaningOptions o;
    o.response = "y";
    o.min_occurrence = 1;
    const Dataset once = clean_table(parse(kToy), o);
    const Dataset twice = clean_table(to_table(once), o);
    EXPECT_EQ(twice.feature_names, once.feature_names);
    EXPECT_EQ(twice.y, once.y);
    ASSERT_EQ(twice.X.rows(), once.X.rows());
    EXPECT_LE((twice.X - once.X).cwiseAbs().maxCoeff(), 1e-12);
    ASSERT_EQ(twice.log.size(), 1u);
    EXPECT_NE(twice.log.front().find("standardize"), std::string::npos);
}

TEST(CleanTable, ErrorCodes)
{
    CleaningOptions o;
    o.response = "zzz";
    EXPECT_EQ(code_of([&] { clean_table(parse(kToy), o); }), Errc::ResponseMissing);
    o.response = "y";
    EXPECT_EQ(code_of([&] { clean_table(parse("a,y\nNA,1\n2,NA\n"), o); }), Errc::EmptyAfterCleaning);
    EXPECT_EQ(code_of([&] { clean_table(parse("a,y\nfoo,1\n2,3\n"), o); }), Errc::MalformedCsv);
}

TEST(CleanTable, ExcludedColumnsReturnedAsExtras)
{
    CleaningOptions o;
    o.response = "y";
    o.min_occurrence = 1;
    o.exclude = {"mut"};
    const Dataset ds = clean_table(parse(kToy), o);
    EXPECT_EQ(ds.feature_names, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(ds.extras.at("mut"), (std::vector<double>{1, 0, 1, 0}));
}

TEST(LoadCsv, FromFile)
{
    const std::string path = write_temp("toy.csv", kToy);
    const Dataset ds = load_csv(path, "y", 1);
    EXPECT_EQ(ds.source, path);
    EXPECT_EQ(ds.X.cols(), 3);
    EXPECT_EQ(code_of([] { load_csv("/nonexistent/file.csv", "y"); }), Errc::FileUnreadable);
    std::filesystem::remove(path);
}

TEST(RealDataPipeline, SingleRerunAndDeterminism)
{
    const Dataset ds = simulated(100, 15, 5, 1.0, 72);
    RealDataOptions o;
    o.alpha_kn = 0.2;
    o.alpha_ebh = 0.2;
    o.runs = 4;
    o.reruns = 1;
    o.master_seed = 5;
    o.cv.grid = 30;
    const RealDataSummary a = real_data_pipeline(ds, o);
    ASSERT_EQ(a.runs.size(), 1u);
    for (Eigen::Index j = 0; j < a.freq_derandomized.size(); ++j) {
        EXPECT_TRUE(a.freq_derandomized(j) == 0.0 || a.freq_derandomized(j) == 1.0);
        EXPECT_TRUE(a.freq_original(j) == 0.0 || a.freq_original(j) == 1.0);
    }
    o.workers = 2;
    const RealDataSummary b = real_data_pipeline(ds, o);
    EXPECT_EQ(to_json(a), to_json(b));
    std::ostringstream fa;
    write_frequencies_csv(fa, a);
    EXPECT_EQ(fa.str().substr(0, fa.str().find('\n')), "feature_name,freq_original,freq_derandomized");
}

TEST(RealDataPipeline, DerandomizedFrequenciesConcentrate)
{
    const Dataset ds = simulated(150, 20, 8, 0.25, 73);
    RealDataOptions o;
    o.alpha_kn = 0.1;
    o.alpha_ebh = 0.2;
    o.runs = 20;
    o.reruns = 10;
    o.master_seed = 6;
    o.cv.grid = 40;
    const RealDataSummary r = real_data_pipeline(ds, o);
    auto middle_mass = [](const Vector& f) {
        return ((f.array() >= 0.1) && (f.array() <= 0.9)).count();
    };
    EXPECT_LT(middle_mass(r.freq_derandomized), middle_mass(r.freq_original))
        << r.freq_original.transpose() << "\n" << r.freq_derandomized.transpose();
}
