use rug::Float;
use serde_json::{json, Value};

use fricke_core::geometry::{fricke_to_triangle, triangle_to_fricke};
use fricke_core::newman::MembershipCertificate;
use fricke_core::real::{parse_real, Tolerances};
use fricke_core::search::{double_point, find_nontorsion_locus, find_torsion_locus};
use fricke_core::words::parse_word;
use fricke_core::{
    classify, evaluate_word, in_normal_closure, is_torsion_type, normal_form, solve_z, trace_polynomial, Axis,
    ConeAngle, Error, FrickePoint, Grid, IsometryClass, LocusKind, LocusResult, TriangleShape,
};

use crate::appendix::{verify_appendix, APPENDIX_TOL, COLUMNS};
use crate::output::{csv, full, json, kv, short, Format};
use crate::{
    BranchArg, CliError, CliResult, Command, DoublePointArgs, FindLocusArgs, GlobalOpts, LocusSpec, Outcome, PointArgs,
};

struct Ctx {
    prec: u32,
    tol: Option<f64>,
    format: Format,
    tols: Tolerances,
}

impl Ctx {
    fn real(&self, s: &str) -> CliResult<Float> {
        Ok(parse_real(s, self.prec)?)
    }

    fn angle(&self, s: &str) -> CliResult<ConeAngle> {
        Ok(ConeAngle::new(self.real(s)?)?)
    }

    fn validity(&self) -> f64 {
        self.tol.unwrap_or(self.tols.validity)
    }
}

pub(crate) fn dispatch(cmd: &Command, g: &GlobalOpts) -> CliResult<Outcome> {
    let ctx = Ctx { prec: g.precision, tol: g.tol, format: g.format(), tols: Tolerances::for_precision(g.precision) };
    match cmd {
        Command::Tracepoly { word } => tracepoly(&ctx, word),
        Command::Eval { word, point } => eval(&ctx, word, point),
        Command::Classify { word, point } => classify_cmd(&ctx, word, point),
        Command::Phi { theta_a, theta_b, theta_c } => phi(&ctx, [theta_a, theta_b, theta_c]),
        Command::PhiInv { theta, x, y, z } => phi_inv(&ctx, theta.as_deref(), [x, y, z]),
        Command::Newman { u, r, m } => newman(&ctx, u, r, *m),
        Command::TorsionType { u } => torsion_type(&ctx, u),
        Command::FindLocus(args) => find_locus(&ctx, args),
        Command::DoublePoint(args) => double_point_cmd(&ctx, args),
        Command::VerifyAppendix => appendix(&ctx),
    }
}

fn done(body: String) -> CliResult<Outcome> {
    Ok(Outcome { body, ok: true })
}

fn point(ctx: &Ctx, pa: &PointArgs) -> CliResult<FrickePoint> {
    let angle = ctx.angle(&pa.theta)?;
    let (x, y) = (ctx.real(&pa.x)?, ctx.real(&pa.y)?);
    if let Some(z) = &pa.z {
        return Ok(FrickePoint::new(x, y, ctx.real(z)?, angle, ctx.validity())?);
    }
    let mut roots = solve_z(&angle, &x, &y)?;
    let pick = match (pa.branch, roots.len()) {
        (_, 0) => None,
        (BranchArg::Smaller, 2) => roots.pop(),
        _ => roots.into_iter().next(),
    };
    pick.ok_or_else(|| Error::InvalidPoint("no z > 2 over (x, y) for this cone angle".into()).into())
}

fn point_lines(pt: &FrickePoint) -> Vec<(&'static str, String)> {
    vec![("theta", full(pt.angle().theta())), ("x", full(pt.x())), ("y", full(pt.y())), ("z", full(pt.z()))]
}

fn tracepoly(ctx: &Ctx, word: &str) -> CliResult<Outcome> {
    let w = parse_word(word)?;
    let g = trace_polynomial(&w);
    done(match ctx.format {
        Format::Text => format!("{g}\n"),
        Format::Json => json(&json!({
            "schema": 1,
            "command": "tracepoly",
            "word": w,
            "polynomial": g.to_string(),
            "degree": g.degree(),
            "terms": g.num_terms(),
        }))?,
        Format::Csv => csv(
            &["word", "polynomial", "degree", "terms"],
            &[vec![w.to_string(), g.to_string(), g.degree().to_string(), g.num_terms().to_string()]],
        )?,
    })
}

fn eval(ctx: &Ctx, word: &str, pa: &PointArgs) -> CliResult<Outcome> {
    let w = parse_word(word)?;
    let pt = point(ctx, pa)?;
    let m = evaluate_word(&normal_form(&pt), &w);
    let [x, y, z] = pt.coords();
    let g = trace_polynomial(&w).eval(x, y, z, ctx.prec);
    let tr = m.trace();
    let e = m.entries();
    done(match ctx.format {
        Format::Text => {
            let mut lines = point_lines(&pt);
            lines.extend([
                ("a", full(e[0])),
                ("b", full(e[1])),
                ("c", full(e[2])),
                ("d", full(e[3])),
                ("trace", full(&tr)),
                ("g_w", full(&g)),
            ]);
            kv(&lines)
        }
        Format::Json => json(&json!({
            "schema": 1,
            "command": "eval",
            "word": w,
            "point": pt.to_record(),
            "matrix": e.map(full),
            "trace": full(&tr),
            "polynomial_value": full(&g),
        }))?,
        Format::Csv => {
            let mut row = vec![short(pt.angle().theta()), short(x), short(y), short(z), w.to_string()];
            row.extend(e.map(short));
            row.push(short(&tr));
            csv(&["theta", "x", "y", "z", "word", "a", "b", "c", "d", "trace"], &[row])?
        }
    })
}

fn class_fields(c: &IsometryClass) -> (Option<&Float>, Option<&Float>) {
    match c {
        IsometryClass::Elliptic { angle } => (Some(angle), None),
        IsometryClass::Hyperbolic { length } => (None, Some(length)),
        _ => (None, None),
    }
}

fn classify_cmd(ctx: &Ctx, word: &str, pa: &PointArgs) -> CliResult<Outcome> {
    let w = parse_word(word)?;
    let pt = point(ctx, pa)?;
    let m = evaluate_word(&normal_form(&pt), &w);
    let class = classify(&m, ctx.tol.unwrap_or(ctx.tols.identity))?;
    let (angle, length) = class_fields(&class);
    done(match ctx.format {
        Format::Text => {
            let mut lines = vec![("class", class.kind().to_string())];
            if let Some(a) = angle {
                lines.push(("angle", full(a)));
            }
            if let Some(l) = length {
                lines.push(("length", full(l)));
            }
            lines.push(("trace", full(&m.trace())));
            kv(&lines)
        }
        Format::Json => json(&json!({
            "schema": 1,
            "command": "classify",
            "word": w,
            "point": pt.to_record(),
            "class": class.to_record(),
            "trace": full(&m.trace()),
        }))?,
        Format::Csv => csv(
            &["theta", "x", "y", "z", "word", "class", "angle", "length"],
            &[vec![
                short(pt.angle().theta()),
                short(pt.x()),
                short(pt.y()),
                short(pt.z()),
                w.to_string(),
                class.kind().to_string(),
                angle.map(short).unwrap_or_default(),
                length.map(short).unwrap_or_default(),
            ]],
        )?,
    })
}

fn phi(ctx: &Ctx, angles: [&String; 3]) -> CliResult<Outcome> {
    let [a, b, c] = angles;
    let shape = TriangleShape::new(ctx.real(a)?, ctx.real(b)?, ctx.real(c)?)?;
    let pt = triangle_to_fricke(&shape)?;
    done(match ctx.format {
        Format::Text => kv(&point_lines(&pt)),
        Format::Json => json(&json!({
            "schema": 1,
            "command": "phi",
            "shape": shape.to_record(),
            "point": pt.to_record(),
        }))?,
        Format::Csv => {
            let [ta, tb, tc] = shape.angles();
            csv(
                &["thetaA", "thetaB", "thetaC", "theta", "x", "y", "z"],
                &[vec![
                    short(ta),
                    short(tb),
                    short(tc),
                    short(pt.angle().theta()),
                    short(pt.x()),
                    short(pt.y()),
                    short(pt.z()),
                ]],
            )?
        }
    })
}

fn phi_inv(ctx: &Ctx, theta: Option<&str>, coords: [&String; 3]) -> CliResult<Outcome> {
    let [x, y, z] = coords;
    let (x, y, z) = (ctx.real(x)?, ctx.real(y)?, ctx.real(z)?);
    let pt = match theta {
        Some(t) => FrickePoint::new(x, y, z, ctx.angle(t)?, ctx.validity())?,
        None => FrickePoint::from_coords(x, y, z)?,
    };
    let shape = fricke_to_triangle(&pt)?;
    let [ta, tb, tc] = shape.angles();
    done(match ctx.format {
        Format::Text => kv(&[
            ("thetaA", full(ta)),
            ("thetaB", full(tb)),
            ("thetaC", full(tc)),
            ("angle sum", full(&shape.angle_sum())),
            ("theta", full(pt.angle().theta())),
        ]),
        Format::Json => json(&json!({
            "schema": 1,
            "command": "phi-inv",
            "point": pt.to_record(),
            "shape": shape.to_record(),
        }))?,
        Format::Csv => csv(
            &["theta", "x", "y", "z", "thetaA", "thetaB", "thetaC"],
            &[vec![
                short(pt.angle().theta()),
                short(pt.x()),
                short(pt.y()),
                short(pt.z()),
                short(ta),
                short(tb),
                short(tc),
            ]],
        )?,
    })
}

fn certificate_text(cert: &MembershipCertificate) -> String {
    let mut s = String::new();
    for (i, st) in cert.steps.iter().enumerate() {
        s.push_str(&format!(
            "  {}. at {}: {} -> {}  gives {}\n",
            i + 1,
            st.position,
            st.replaced,
            st.replacement,
            st.result
        ));
    }
    const SHOWN: usize = 8;
    if !cert.dead_states.is_empty() {
        s.push_str(&format!("  dead states: {}\n", cert.dead_states.len()));
        for d in cert.dead_states.iter().take(SHOWN) {
            s.push_str(&format!("    {d}\n"));
        }
        if cert.dead_states.len() > SHOWN {
            s.push_str(&format!("    ... and {} more\n", cert.dead_states.len() - SHOWN));
        }
    }
    s
}

fn newman(ctx: &Ctx, u: &str, r: &str, m: u32) -> CliResult<Outcome> {
    let (u, r) = (parse_word(u)?, parse_word(r)?);
    let out = in_normal_closure(&u, &r, m)?;
    let cert = &out.certificate;
    done(match ctx.format {
        Format::Text => {
            let mut s = kv(&[
                ("decision", out.decision.to_string()),
                ("relator", format!("({})^{}", cert.root, cert.exponent)),
                ("states explored", cert.states_explored.to_string()),
            ]);
            s.push_str(&certificate_text(cert));
            s
        }
        Format::Json => json(&json!({
            "schema": 1,
            "command": "newman",
            "u": u,
            "r": r,
            "m": m,
            "decision": out.decision,
            "witness": if out.decision {
                json!({ "root": cert.root, "exponent": cert.exponent })
            } else {
                Value::Null
            },
            "certificate_steps": cert.steps,
            "dead_states": cert.dead_states,
            "states_explored": cert.states_explored,
        }))?,
        Format::Csv => csv(
            &["u", "r", "m", "decision", "steps", "dead_states", "states_explored"],
            &[vec![
                u.to_string(),
                r.to_string(),
                m.to_string(),
                out.decision.to_string(),
                cert.steps.len().to_string(),
                cert.dead_states.len().to_string(),
                cert.states_explored.to_string(),
            ]],
        )?,
    })
}

fn torsion_type(ctx: &Ctx, u: &str) -> CliResult<Outcome> {
    let u = parse_word(u)?;
    let out = is_torsion_type(&u)?;
    done(match ctx.format {
        Format::Text => {
            let mut s = kv(&[
                ("decision", out.decision.to_string()),
                ("candidates refuted", out.refutations.len().to_string()),
                ("states explored", out.states_explored().to_string()),
            ]);
            if let Some(w) = &out.witness {
                s.push_str(&format!("witness: ({})^{}\n", w.root, w.exponent));
                s.push_str(&certificate_text(&w.certificate));
            }
            for (c, cert) in &out.refutations {
                s.push_str(&format!(
                    "refuted ({})^{}: {} states, {} dead\n",
                    c.root,
                    c.exponent,
                    cert.states_explored,
                    cert.dead_states.len()
                ));
            }
            s
        }
        Format::Json => json(&json!({
            "schema": 1,
            "command": "torsion-type",
            "u": u,
            "decision": out.decision,
            "witness": out.witness.as_ref().map(|w| json!({ "root": w.root, "exponent": w.exponent })),
            "certificate_steps": out.witness.as_ref().map(|w| w.certificate.steps.clone()).unwrap_or_default(),
            "refuted": out.refutations.iter().map(|(c, cert)| json!({
                "root": c.root,
                "exponent": c.exponent,
                "states_explored": cert.states_explored,
                "dead_states": cert.dead_states,
            })).collect::<Vec<_>>(),
            "states_explored": out.states_explored(),
        }))?,
        Format::Csv => csv(
            &["u", "decision", "witness", "candidates_refuted", "states_explored"],
            &[vec![
                u.to_string(),
                out.decision.to_string(),
                out.witness.as_ref().map(|w| format!("({})^{}", w.root, w.exponent)).unwrap_or_default(),
                out.refutations.len().to_string(),
                out.states_explored().to_string(),
            ]],
        )?,
    })
}

/// `A:B`, `A..=B`, `A-B` (inclusive) or a single `N`.
pub(crate) fn parse_n_range(s: &str) -> CliResult<Vec<u32>> {
    let bad = || CliError::Usage(format!("N range must look like A:B or A..=B, got {s:?}"));
    let s = s.trim();
    let (a, b) = if let Some((a, b)) = s.split_once("..=") {
        (a, b)
    } else if let Some((a, b)) = s.split_once(':') {
        (a, b)
    } else if let Some((a, b)) = s.split_once('-') {
        (a, b)
    } else {
        (s, s)
    };
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b < a {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

pub(crate) fn parse_fraction(s: &str) -> CliResult<(u32, u32)> {
    let bad = || CliError::Usage(format!("torsion target must look like p/q, got {s:?}"));
    let (p, q) = s.split_once('/').ok_or_else(bad)?;
    Ok((p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
}

fn search(
    ctx: &Ctx,
    angle: &ConeAngle,
    coord: Option<Axis>,
    n_range: &str,
    grid: Grid,
    torsion: Option<&str>,
) -> CliResult<Vec<LocusResult>> {
    let ns = parse_n_range(n_range)?;
    let mut grid = grid;
    if let Some(t) = ctx.tol {
        grid.cert_tol = t;
    }
    Ok(match torsion {
        Some(frac) => {
            let (p, q) = parse_fraction(frac)?;
            find_torsion_locus(angle, &ns, p, q, coord.unwrap_or(Axis::X), &grid)?
        }
        None => find_nontorsion_locus(angle, &ns, coord.unwrap_or(Axis::Z), &grid)?,
    })
}

fn locus_csv_row(r: &LocusResult) -> Vec<String> {
    let q = match r.kind {
        LocusKind::Torsion { p, q } => format!("{p}/{q}"),
        LocusKind::NonTorsion => String::new(),
    };
    vec![
        short(r.angle.theta()),
        r.axis.to_string(),
        r.n.to_string(),
        short(&r.s),
        q,
        r.max_residual().as_ref().map(|m| fricke_core::real::to_decimal_digits(m, 3)).unwrap_or_default(),
    ]
}

const LOCUS_HEADER: [&str; 6] = ["theta", "coordinate", "N", "s", "q", "max_residual"];

fn find_locus(ctx: &Ctx, args: &FindLocusArgs) -> CliResult<Outcome> {
    let angle = ctx.angle(&args.theta)?;
    let mut grid = Grid::parse(&args.locus.grid)?;
    grid.samples = args.samples;
    grid.bisection_tol = args.bisection_tol;
    let LocusSpec { coord, n_range, torsion, .. } = &args.locus;
    let results = search(ctx, &angle, *coord, n_range, grid, torsion.as_deref())?;
    let body = match ctx.format {
        Format::Text => {
            if results.is_empty() {
                "no certified locus found\n".to_string()
            } else {
                let mut s = String::new();
                for r in &results {
                    s.push_str(&format!(
                        "N = {}  {} = {}  max residual = {}",
                        r.n,
                        r.axis,
                        full(&r.s),
                        r.max_residual()
                            .as_ref()
                            .map(|m| fricke_core::real::to_decimal_digits(m, 3))
                            .unwrap_or_default()
                    ));
                    if let Some(ok) = r.parallel_angle_ok {
                        s.push_str(&format!("  parallel-angle condition {}", if ok { "holds" } else { "fails" }));
                    }
                    s.push('\n');
                }
                s
            }
        }
        Format::Json => json(&results.iter().map(LocusResult::to_record).collect::<Vec<_>>())?,
        Format::Csv => csv(&LOCUS_HEADER, &results.iter().map(locus_csv_row).collect::<Vec<_>>())?,
    };
    Ok(Outcome { body, ok: !results.is_empty() })
}

fn double_point_cmd(ctx: &Ctx, args: &DoublePointArgs) -> CliResult<Outcome> {
    let angle = ctx.angle(&args.theta)?;
    let first = |coord: Axis, n: &str, grid: &str, torsion: Option<&str>| -> CliResult<LocusResult> {
        let found = search(ctx, &angle, Some(coord), n, Grid::parse(grid)?, torsion)?;
        found.into_iter().next().ok_or_else(|| {
            Error::NoIntersection(format!("no certified locus on {coord} for N = {n} over {grid}")).into()
        })
    };
    let l1 = first(args.coord1, &args.n1, &args.grid1, args.torsion1.as_deref())?;
    let l2 = first(args.coord2, &args.n2, &args.grid2, args.torsion2.as_deref())?;
    let dp = double_point(&angle, &l1, &l2, ctx.tol.unwrap_or(1e-25))?;
    let residual = |r: &Float| fricke_core::real::to_decimal_digits(r, 3);
    let body = match ctx.format {
        Format::Text => {
            let mut lines = point_lines(&dp.point);
            lines.extend([
                ("word 1", l1.word.to_string()),
                ("residual 1", residual(&dp.residuals[0])),
                ("word 2", l2.word.to_string()),
                ("residual 2", residual(&dp.residuals[1])),
                ("certified", dp.certified.to_string()),
            ]);
            kv(&lines)
        }
        Format::Json => json(&json!({
            "schema": 1,
            "command": "double-point",
            "point": dp.point.to_record(),
            "loci": [l1.to_record(), l2.to_record()],
            "residuals": dp.residuals.each_ref().map(residual),
            "certified": dp.certified,
        }))?,
        Format::Csv => csv(
            &["theta", "x", "y", "z", "residual1", "residual2", "certified"],
            &[vec![
                short(angle.theta()),
                short(dp.point.x()),
                short(dp.point.y()),
                short(dp.point.z()),
                residual(&dp.residuals[0]),
                residual(&dp.residuals[1]),
                dp.certified.to_string(),
            ]],
        )?,
    };
    Ok(Outcome { body, ok: dp.certified })
}

fn appendix(ctx: &Ctx) -> CliResult<Outcome> {
    let report = verify_appendix(ctx.prec, ctx.tol.unwrap_or(APPENDIX_TOL));
    let body = match ctx.format {
        Format::Text => {
            let mut s = String::new();
            for row in &report.rows {
                s.push_str(&format!("{}: {}\n", row.name, if row.passed { "pass" } else { "FAIL" }));
                for (i, col) in COLUMNS.iter().enumerate() {
                    let computed =
                        row.computed.as_ref().map(|c| format!("  computed {}", short_str(&c[i]))).unwrap_or_default();
                    s.push_str(&format!("  {col:<9} table {:>8.4}{computed}\n", row.expected[i]));
                }
                s.push_str(&format!("  {}\n", row.note));
            }
            s.push_str(&format!("overall: {}\n", if report.passed { "pass" } else { "FAIL" }));
            s
        }
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut rows = Vec::new();
            for row in &report.rows {
                for (i, col) in COLUMNS.iter().enumerate() {
                    rows.push(vec![
                        row.name.clone(),
                        col.to_string(),
                        format!("{}", row.expected[i]),
                        row.computed.as_ref().map(|c| short_str(&c[i])).unwrap_or_default(),
                        row.passed.to_string(),
                    ]);
                }
            }
            csv(&["manifold", "column", "table", "computed", "passed"], &rows)?
        }
    };
    Ok(Outcome { body, ok: report.passed })
}

/// Rounds a full-precision decimal string for display.
fn short_str(s: &str) -> String {
    Float::parse(s).map(|v| short(&Float::with_val(64, v))).unwrap_or_else(|_| s.to_string())
}
