#include "berkdyn/report.hpp"

#include <sstream>

namespace berkdyn {

namespace {

Json rat_json(const Rat& r) { return rat_to_string(r); }

Json point_json(const ProjPoint& x) { return x.to_string(); }

Json berk_json(const BerkPoint& s) { return s.to_string(); }

Json annulus_json(const Annulus& a) {
    Json j;
    j["center"] = rat_json(a.center);
    j["t_in"] = rat_json(a.t_in);
    j["t_out"] = rat_json(a.t_out);
    j["modulus"] = rat_json(a.modulus());
    if (a.inverted) j["chart"] = "1/z";
    return j;
}

Json record_json(const FixedPointRecord& rec) {
    Json j;
    j["point"] = point_json(rec.point);
    j["period"] = rec.period;
    j["multiplier"] = rat_json(rec.multiplier.value());
    const ValExp& v = rec.multiplier.valuation();
    j["multiplier_valuation"] = v.inf ? Json("inf") : rat_json(v.v);
    j["class"] = rec.class_name();
    j["provenance"] =
        rec.exact ? "exact" : ("hensel-approximate(" + std::to_string(rec.hensel_precision) + ")");
    return j;
}

BallSpec parse_ball(const std::string& text) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream is(text);
    while (std::getline(is, part, ';')) parts.push_back(part);
    if (parts.size() < 2 || parts.size() > 3)
        fail(ErrorCode::SyntaxError, "ball is written a;t or a;t;open|closed: '" + text + "'");
    auto a = rat_from_string(parts[0]);
    auto t = rat_from_string(parts[1]);
    if (!a || !t) fail(ErrorCode::SyntaxError, "bad rational in ball '" + text + "'");
    bool open = false;
    if (parts.size() == 3) {
        if (parts[2] == "open")
            open = true;
        else if (parts[2] == "closed")
            open = false;
        else
            fail(ErrorCode::SyntaxError, "ball flag must be open or closed: '" + text + "'");
    }
    return BallSpec{*a, *t, open};
}

Residue parse_residue(const std::string& text) {
    if (text == "inf") return Residue{true, 0};
    try {
        return Residue{false, std::stol(text)};
    } catch (...) {
        fail(ErrorCode::SyntaxError, "residue must be an integer or inf: '" + text + "'");
    }
}

} // namespace

JobSpec job_from_json(const Json& j) {
    JobSpec job;
    job.command = j.value("command", "");
    job.map_text = j.value("map", "");
    job.p = j.value("p", 0);
    job.point = j.value("point", "");
    job.value = j.value("value", "");
    job.ball = j.value("ball", "");
    job.annulus = j.value("annulus", "");
    job.direction = j.value("direction", "");
    job.n = j.value("n", 1);
    job.m_max = j.value("m_max", 12);
    if (j.contains("step")) {
        auto r = rat_from_string(j["step"].get<std::string>());
        if (!r) fail(ErrorCode::SyntaxError, "bad step");
        job.step0 = *r;
    }
    if (j.contains("precision")) job.budgets.precision = j["precision"].get<int>();
    if (j.contains("jet_order")) job.budgets.jet_order = j["jet_order"].get<int>();
    if (j.contains("iterations")) job.budgets.orbit_iterations = j["iterations"].get<long>();
    if (j.contains("march_steps")) job.budgets.march_steps = j["march_steps"].get<long>();
    return job;
}

int exit_code_for(ErrorCode c) {
    switch (c) {
        case ErrorCode::BudgetExhausted:
            return 3;
        case ErrorCode::UnsupportedRamification:
        case ErrorCode::FieldTooLarge:
        case ErrorCode::HenselObstruction:
        case ErrorCode::JetTailDominates:
        case ErrorCode::PrecisionExhausted:
            return 4;
        case ErrorCode::Internal:
            return 5;
        default:
            return 2;
    }
}

Json run(const JobSpec& job) {
    if (job.p < 2) fail(ErrorCode::InvalidArgument, "a prime p >= 2 is required");
    Int p(job.p);
    if (mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
        fail(ErrorCode::InvalidArgument, job.p == 0 ? "missing prime" : "p is not prime");
    RatMap R = parse_map(job.map_text, p);
    Json out;
    out["command"] = job.command;
    out["map"] = render_map(R);
    out["p"] = job.p;
    out["degree"] = R.degree();

    const std::string& cmd = job.command;
    if (cmd == "reduce") {
        BerkPoint S = job.point.empty() ? BerkPoint::gauss() : parse_point(job.point, p);
        Pushforward pf = pushforward_point(R, S);
        out["point"] = berk_json(S);
        out["image"] = berk_json(pf.image);
        out["local_degree"] = pf.degree;
        out["reduced_map"] = ffmap_to_string(*pf.reduced.field, pf.reduced.map);
        out["provenance"] = "exact";
        return out;
    }
    if (cmd == "fixed-points" || cmd == "periodic-points") {
        Json arr = Json::array();
        if (cmd == "fixed-points") {
            for (const auto& rec : fixed_points(R, job.budgets.precision))
                arr.push_back(record_json(rec));
        } else {
            for (const auto& rec :
                 periodic_points(R, job.n, job.budgets.precision, job.budgets.degree_cap)) {
                Json rj = record_json(rec.record);
                rj["primitive_period"] = rec.primitive_period;
                arr.push_back(rj);
            }
        }
        out["points"] = arr;
        return out;
    }
    if (cmd == "exceptional") {
        ExceptionalSet es = exceptional_set(R);
        Json arr = Json::array();
        for (size_t i = 0; i < es.points.size(); ++i) {
            Json e;
            e["point"] = point_json(es.points[i]);
            e["certificate"] = es.certificates[i];
            arr.push_back(e);
        }
        out["points"] = arr;
        out["provenance"] = "exact";
        return out;
    }
    if (cmd == "ball-image") {
        BallSpec ball = parse_ball(job.ball);
        DiskImage img = disk_image(R, ball);
        out["ball"] = Json{{"center", rat_json(ball.center)},
                           {"exponent", rat_json(ball.exponent)},
                           {"open", ball.open}};
        if (img.kind == DiskImage::Kind::WholeSphere) {
            out["image"] = "P1";
        } else {
            Json ij;
            ij["center"] = rat_json(img.center);
            ij["exponent"] = rat_json(img.exponent);
            ij["open"] = img.open;
            if (img.inverted) {
                ij["chart"] = "1/(w - pivot)";
                ij["pivot"] = rat_json(img.pivot);
            }
            out["image"] = ij;
            out["weierstrass_degree"] = img.weierstrass_degree;
        }
        out["provenance"] = "exact";
        return out;
    }
    if (cmd == "annulus-image") {
        Annulus C = parse_annulus(job.annulus);
        AnnulusImage ai = annulus_image(R, C);
        out["annulus"] = annulus_json(C);
        out["alpha"] = rat_json(ai.alpha);
        out["d"] = ai.d;
        if (ai.image) out["image"] = annulus_json(*ai.image);
        out["provenance"] = "exact";
        return out;
    }
    if (cmd == "modulus-growth") {
        BerkPoint S = parse_point(job.point, p);
        Direction dir{S, parse_residue(job.direction)};
        Annulus C = parse_annulus(job.annulus);
        ModulusGrowth mg = modulus_growth(R, dir, C);
        out["end"] = Json{{"base", berk_json(S)}, {"residue", dir.residue.to_string()}};
        out["end_degree"] = mg.end_degree;
        out["modulus_in"] = rat_json(mg.modulus_in);
        if (mg.engulfs) {
            out["result"] = "engulfs";
        } else {
            out["result"] = "annulus";
            out["image"] = annulus_json(*mg.image);
            out["modulus_out"] = rat_json(mg.modulus_out);
        }
        out["collar_modulus"] = mg.collar_infinite ? Json("inf") : rat_json(mg.collar_modulus);
        out["provenance"] = "exact";
        return out;
    }
    if (cmd == "hp-fixed") {
        HpFixedPoints hp = hp_fixed_points(R, job.budgets);
        Json arr = Json::array();
        for (const auto& tfp : hp.points) {
            Json e;
            e["point"] = berk_json(tfp.point);
            e["degree"] = tfp.degree;
            e["class"] = tfp.repelling() ? "repelling" : "indifferent";
            arr.push_back(e);
        }
        out["points"] = arr;
        out["strategy"] = "heuristic candidates, each verified exactly";
        out["provenance"] = "exact";
        return out;
    }
    if (cmd == "march") {
        BerkPoint S = job.point.empty() ? BerkPoint::gauss() : parse_point(job.point, p);
        MarchResult mr = fixed_point_search(R, S, job.step0, job.budgets);
        out["start"] = berk_json(S);
        switch (mr.kind) {
            case MarchResult::Kind::RationalFixedPoint:
                out["result"] = "rational-fixed-point";
                out["fixed_point"] = berk_json(mr.fixed_point.point);
                out["degree"] = mr.fixed_point.degree;
                out["class"] = mr.fixed_point.repelling() ? "repelling" : "indifferent";
                break;
            case MarchResult::Kind::AttractingEnd:
                out["result"] = "attracting-end";
                out["attractor"] = point_json(mr.attractor);
                out["provenance"] = mr.attractor_exact ? "exact" : "sampled";
                break;
            case MarchResult::Kind::BudgetExhausted:
                out["result"] = "budget-exhausted";
                break;
        }
        Json trace = Json::array();
        for (const auto& st : mr.trace) {
            trace.push_back(Json{{"point", berk_json(st.point)},
                                 {"distance_to_image", rat_json(st.distance_to_image)}});
        }
        out["steps"] = trace.size();
        out["trace"] = trace;
        return out;
    }
    if (cmd == "epsilon-norms") {
        BallSpec ball = parse_ball(job.ball);
        EpsilonNorms en = epsilon_norms(R, ball.center, ball.exponent, job.m_max,
                                        job.budgets.jet_order);
        if (en.degenerate_identity) {
            out["result"] = "identity";
            return out;
        }
        Json arr = Json::array();
        for (const auto& e : en.exponents) arr.push_back(rat_json(e));
        out["exponents"] = arr;
        out["certified_upto"] = en.certified_upto;
        out["unit_step_onset"] = en.unit_step_onset;
        out["provenance"] = "exact";
        return out;
    }
    if (cmd == "classify") {
        ProjPoint x = parse_proj_point(job.value);
        ClassificationReport rep = classify_fatou_point(R, x, job.budgets);
        out["point"] = point_json(x);
        switch (rep.verdict) {
            case ClassificationReport::Verdict::AttractingBasin: {
                out["verdict"] = "attracting-basin";
                Json cyc = Json::array();
                for (const auto& c : rep.cycle) cyc.push_back(point_json(c));
                out["cycle"] = cyc;
                out["immediate"] =
                    rep.immediate == 1 ? Json(true) : (rep.immediate == 0 ? Json(false) : Json("unknown"));
                break;
            }
            case ClassificationReport::Verdict::QuasiPeriodic:
                out["verdict"] = "quasi-periodic";
                out["disk"] = Json{{"center", rat_json(rep.certified_disk.center)},
                                   {"exponent", rat_json(rep.certified_disk.exponent)},
                                   {"period", rep.disk_period}};
                break;
            case ClassificationReport::Verdict::PreimageOfQuasiPeriodic:
                out["verdict"] = "preimage-of-quasi-periodic";
                out["preperiod"] = rep.preperiod;
                break;
            case ClassificationReport::Verdict::Unknown:
                out["verdict"] = "unknown";
                break;
        }
        out["evidence"] = rep.evidence;
        out["provenance"] = "exact";
        return out;
    }
    if (cmd == "orbit") {
        ProjPoint x = parse_proj_point(job.value);
        auto orbit = exact_orbit(R, x, job.n);
        Json arr = Json::array();
        for (const auto& q : orbit) arr.push_back(point_json(q));
        out["orbit"] = arr;
        out["provenance"] = "exact";
        return out;
    }
    if (cmd == "preimages") {
        BallSpec ball = parse_ball(job.ball);
        auto disks = preimage_disks(R, ball.center, ball.exponent);
        Json arr = Json::array();
        for (const auto& d : disks) {
            Json e;
            e["center"] = rat_json(d.center);
            e["exponent"] = rat_json(d.exponent);
            e["degree"] = d.degree;
            if (d.at_infinity) e["chart"] = "1/z";
            e["provenance"] =
                d.center_exact ? "exact" : ("hensel-approximate(" + std::to_string(d.hensel_digits) + ")");
            arr.push_back(e);
        }
        out["components"] = arr;
        return out;
    }
    fail(ErrorCode::InvalidArgument, "unknown command '" + cmd + "'");
}

} // namespace berkdyn
