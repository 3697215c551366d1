//! `vmetric`: the library's operations over JSON files.

mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use input::{domain, point, usage, CliError};
use vmetric::amalgam::{
    disjoint_amalgam, one_point_amalgam, orbit, realize_socket, validate_dsocket, DSocket,
    UrysohnBuilder,
};
use vmetric::connect::{
    cantor_report, eps_components, lambda, lambda_eps, subdominant_ultrametric, Partition,
};
use vmetric::divide::{
    ball_cover, divisibility_experiment, divisibility_partition, ring, scattered_fixpoint, stripes,
    sub_isolated_points, ultra_spec_partition, unbounded_partition,
};
use vmetric::space::{chain_space, example_space_mn, line_space, sup_power, EmbeddingSearch};
use vmetric::ultra::{
    greedy_monochromatic_embedding, homogeneity_check, indivisibility_report, nerve,
    omega_level_partition, omega_sequence_space, tree_to_space, OmegaSpec, DEFAULT_SIZE_LIMIT,
};
use vmetric::values::{
    dv, dv_distance, four_values_check, gap_report, sufficient_condition_check, FourValues,
};
use vmetric::{FiniteMetricSpace, Rational};

#[derive(Parser)]
#[command(
    name = "vmetric",
    version,
    about = "Finite metric spaces over a value set"
)]
struct Cli {
    /// Worker threads for parallel searches; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Four-values condition of a value set.
    #[command(name = "check-4vc")]
    Check4vc {
        values: PathBuf,
        /// Also report the sufficient condition.
        #[arg(long)]
        sufficient: bool,
    },
    /// The distance d_V on a value set, as a table or for one pair.
    Dv {
        values: PathBuf,
        #[arg(long, requires = "y")]
        x: Option<Rational>,
        #[arg(long, requires = "x")]
        y: Option<Rational>,
    },
    /// Gaps between consecutive values.
    Gaps { values: PathBuf },
    /// Checks the metric axioms of a space.
    Validate {
        space: PathBuf,
        #[arg(short = 'V', long = "values")]
        values: Option<PathBuf>,
    },
    /// Amalgamates two spaces agreeing on their common points.
    Amalgamate {
        m1: PathBuf,
        m2: PathBuf,
        #[arg(short = 'V', long = "values")]
        values: PathBuf,
    },
    /// Adds a point realizing a socket, or lists its orbit.
    SocketRealize {
        space: PathBuf,
        socket: PathBuf,
        #[arg(short = 'V', long = "values")]
        values: PathBuf,
        #[arg(long)]
        orbit_only: bool,
    },
    /// Grows a finite Urysohn approximant.
    BuildUrysohn {
        #[arg(short = 'V', long = "values")]
        values: PathBuf,
        #[arg(long)]
        max_points: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        socket_size: Option<usize>,
        #[arg(long)]
        seed_space: Option<PathBuf>,
    },
    /// The valued tree of balls of an ultrametric space.
    Nerve {
        space: PathBuf,
        #[arg(long, value_parser = ["json", "dot"], default_value = "json")]
        format: String,
    },
    /// The ultrametric space on the leaves of a valued tree.
    Tree2space { tree: PathBuf },
    /// Homogeneity of a valued tree (or of the nerve of a space).
    HomogCheck { input: PathBuf },
    /// A sequence space with given weights and degrees.
    OmegaGen {
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SIZE_LIMIT)]
        size_limit: usize,
        /// Emit the partition by this coordinate instead of the space.
        #[arg(long)]
        level: Option<usize>,
    },
    /// Homogeneity and node degrees against a cap.
    IndivReport {
        space: PathBuf,
        #[arg(long, default_value_t = 4)]
        cap: usize,
    },
    /// A copy of the space inside one block of a two-block partition.
    GreedyMono { space: PathBuf, partition: PathBuf },
    /// Classes joined by chains with steps at most eps.
    EpsComp {
        space: PathBuf,
        #[arg(long)]
        eps: Rational,
    },
    /// lambda(a), or lambda_eps(a) with --eps.
    Lambda {
        space: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long)]
        eps: Option<Rational>,
    },
    /// The subdominant ultrametric.
    Dstar { space: PathBuf },
    /// Chain components at every distance.
    Cantor { space: PathBuf },
    /// Points with lo <= d(center, x) < hi.
    Ring {
        space: PathBuf,
        #[arg(long)]
        center: String,
        #[arg(long)]
        lo: Rational,
        #[arg(long)]
        hi: Rational,
    },
    /// Even and odd stripes of the ball of radius l.
    Stripes {
        space: PathBuf,
        #[arg(long)]
        center: String,
        #[arg(long)]
        l: Rational,
    },
    /// Disjoint ball cover with radii below lambda/2.
    Cover {
        space: PathBuf,
        #[arg(long)]
        lambda: Rational,
        /// Comma-separated labels giving the center order.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<String>>,
    },
    /// Stripes inside every ball of the cover.
    Partition {
        space: PathBuf,
        #[arg(long)]
        lambda: Rational,
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<String>>,
    },
    /// Alternating rings with growing radii around a point.
    UnboundedPartition {
        space: PathBuf,
        #[arg(long)]
        a0: String,
    },
    /// Ring partition of an ultrametric space along a radius sequence.
    UltraPartition {
        space: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long, value_delimiter = ',')]
        r: Vec<Rational>,
    },
    /// Sub-isolated points and the derivative sequence.
    Scatter {
        space: PathBuf,
        #[arg(short = 'W', long = "values")]
        values: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        sizes: Vec<usize>,
    },
    /// Isometric embeddings of one space into another.
    Embed {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Whether any block of a partition holds a copy of the space.
    Experiment { space: PathBuf, partition: PathBuf },
    /// Built-in spaces.
    Fixture {
        #[command(subcommand)]
        kind: Fixture,
    },
}

#[derive(Subcommand)]
enum Fixture {
    /// A chain x0..xn of n steps inside [0, ell].
    Chain {
        #[arg(short = 'V', long = "values")]
        values: PathBuf,
        #[arg(long)]
        ell: Rational,
        #[arg(long)]
        n: usize,
    },
    /// The space of rows (m, n) for n <= N.
    Mn {
        #[arg(long)]
        n: u64,
    },
    /// The n-th sup-power of a space.
    SupPower {
        space: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Points on the real line.
    Line {
        #[arg(long, value_delimiter = ',')]
        points: Vec<Rational>,
    },
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn labels(space: &FiniteMetricSpace, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| space.label(i).to_string()).collect()
}

fn order(
    space: &FiniteMetricSpace,
    order: Option<Vec<String>>,
) -> Result<Option<Vec<usize>>, CliError> {
    order
        .map(|o| o.iter().map(|l| point(space, l)).collect())
        .transpose()
}

enum Output {
    Json(Value),
    Text(String),
}

fn run(command: Command, jobs: usize) -> Result<Output, CliError> {
    let parallel = jobs > 1;
    let out = match command {
        Command::Check4vc { values, sufficient } => {
            let v = input::values(&values)?;
            let mut out = match four_values_check(&v) {
                FourValues::Holds => json!({"result": "holds"}),
                FourValues::CounterExample(quad) => {
                    json!({"result": "counterexample", "quad": quad})
                }
            };
            if sufficient {
                out["sufficient"] = json!(sufficient_condition_check(&v));
            }
            out
        }
        Command::Dv { values, x, y } => {
            let v = input::values(&values)?;
            match (x, y) {
                (Some(x), Some(y)) => {
                    json!({"x": x, "y": y, "dv": dv(&v, &x, &y).map_err(domain)?})
                }
                _ => {
                    let t = dv_distance(&v).map_err(domain)?;
                    json!({"values": t.values.values(), "table": t.table})
                }
            }
        }
        Command::Gaps { values } => to_value(&gap_report(&input::values(&values)?)),
        Command::Validate { space, values } => {
            let mut s = input::space(&space)?;
            if let Some(v) = values {
                s = s.with_value_set(input::values(&v)?).map_err(domain)?;
            }
            json!({
                "valid": true,
                "points": s.len(),
                "spectrum": s.spectrum().values(),
                "diameter": s.diameter(),
            })
        }
        Command::Amalgamate { m1, m2, values } => {
            let (a, b, v) = (
                input::space(&m1)?,
                input::space(&m2)?,
                input::values(&values)?,
            );
            let extra = |x: &FiniteMetricSpace, y: &FiniteMetricSpace| {
                x.labels()
                    .iter()
                    .filter(|l| y.index_of(l).is_none())
                    .count()
            };
            let res = if extra(&a, &b) == 1 && extra(&b, &a) == 1 {
                one_point_amalgam(&a, &b, &v)
            } else {
                disjoint_amalgam(&a, &b, &v)
            };
            to_value(&res.map_err(domain)?)
        }
        Command::SocketRealize {
            space,
            socket,
            values,
            orbit_only,
        } => {
            let s = input::space(&space)?;
            let socket: DSocket = input::json(&socket)?;
            let v = input::values(&values)?;
            if orbit_only {
                let valid = validate_dsocket(&s, &socket).map_err(domain)?;
                let orb = orbit(&s, &socket).map_err(domain)?;
                json!({"valid": valid, "orbit": labels(&s, &orb)})
            } else {
                let r = realize_socket(&s, &socket, &v).map_err(domain)?;
                json!({"space": r.space, "point": r.space.label(r.point), "chosen": r.chosen})
            }
        }
        Command::BuildUrysohn {
            values,
            max_points,
            seed,
            socket_size,
            seed_space,
        } => {
            let mut b = UrysohnBuilder::new(input::values(&values)?, max_points, seed);
            if let Some(cap) = socket_size {
                b = b.socket_size(cap);
            }
            if let Some(p) = seed_space {
                b = b.seed_space(input::space(&p)?);
            }
            to_value(&b.build().map_err(domain)?)
        }
        Command::Nerve { space, format } => {
            let t = nerve(&input::space(&space)?).map_err(domain)?;
            if format == "dot" {
                return Ok(Output::Text(t.to_dot()));
            }
            to_value(&t)
        }
        Command::Tree2space { tree } => {
            to_value(&tree_to_space(&input::tree(&tree)?).map_err(domain)?)
        }
        Command::HomogCheck { input } => {
            to_value(&homogeneity_check(&input::tree_or_space(&input)?))
        }
        Command::OmegaGen {
            spec,
            size_limit,
            level,
        } => {
            let spec: OmegaSpec = input::json(&spec)?;
            match level {
                Some(l) => json!({"blocks": omega_level_partition(&spec, l).map_err(domain)?}),
                None => to_value(&omega_sequence_space(&spec, size_limit).map_err(domain)?),
            }
        }
        Command::IndivReport { space, cap } => {
            to_value(&indivisibility_report(&input::space(&space)?, cap).map_err(domain)?)
        }
        Command::GreedyMono { space, partition } => {
            let s = input::space(&space)?;
            let blocks = input::partition(&partition)?
                .to_indices(&s)
                .map_err(domain)?;
            if blocks.len() > 2 {
                return Err(usage("the coloring needs at most two blocks"));
            }
            let mut coloring = vec![0u8; s.len()];
            for (c, block) in blocks.iter().enumerate() {
                for &i in block {
                    coloring[i] = c as u8;
                }
            }
            to_value(&greedy_monochromatic_embedding(&s, &coloring).map_err(domain)?)
        }
        Command::EpsComp { space, eps } => to_value(&eps_components(&input::space(&space)?, &eps)),
        Command::Lambda {
            space,
            point: p,
            eps,
        } => {
            let s = input::space(&space)?;
            let a = point(&s, &p)?;
            match eps {
                Some(e) => {
                    json!({"point": p, "eps": e, "lambda": lambda_eps(&s, a, &e).map_err(domain)?})
                }
                None => json!({"point": p, "lambda": lambda(&s, a).map_err(domain)?}),
            }
        }
        Command::Dstar { space } => to_value(&subdominant_ultrametric(&input::space(&space)?)),
        Command::Cantor { space } => to_value(&cantor_report(&input::space(&space)?)),
        Command::Ring {
            space,
            center,
            lo,
            hi,
        } => {
            let s = input::space(&space)?;
            let pts = ring(&s, point(&s, &center)?, &lo, &hi).map_err(domain)?;
            json!({"points": labels(&s, &pts)})
        }
        Command::Stripes { space, center, l } => {
            let s = input::space(&space)?;
            to_value(&stripes(&s, point(&s, &center)?, &l).map_err(domain)?)
        }
        Command::Cover {
            space,
            lambda,
            order: o,
        } => {
            let s = input::space(&space)?;
            let o = order(&s, o)?;
            to_value(&ball_cover(&s, &lambda, o.as_deref()).map_err(domain)?)
        }
        Command::Partition {
            space,
            lambda,
            order: o,
        } => {
            let s = input::space(&space)?;
            let o = order(&s, o)?;
            let cover = ball_cover(&s, &lambda, o.as_deref()).map_err(domain)?;
            let eo = divisibility_partition(&s, &cover).map_err(domain)?;
            json!({"cover": cover, "even": eo.even, "odd": eo.odd})
        }
        Command::UnboundedPartition { space, a0 } => {
            let s = input::space(&space)?;
            to_value(&unbounded_partition(&s, point(&s, &a0)?).map_err(domain)?)
        }
        Command::UltraPartition { space, a, r } => {
            let s = input::space(&space)?;
            to_value(&ultra_spec_partition(&s, point(&s, &a)?, &r).map_err(domain)?)
        }
        Command::Scatter {
            space,
            values,
            sizes,
        } => {
            let s = input::space(&space)?;
            let w = input::values(&values)?;
            let first = sub_isolated_points(&s, &w, &sizes);
            let rep = scattered_fixpoint(&s, &w, &sizes);
            json!({"sub_isolated": labels(&s, &first), "chain": rep.chain, "sub_scattered": rep.sub_scattered})
        }
        Command::Embed {
            source,
            target,
            limit,
        } => {
            let (a, b) = (input::space(&source)?, input::space(&target)?);
            let mut search = EmbeddingSearch::new(&a, &b).parallel(parallel);
            if let Some(l) = limit {
                search = search.limit(l);
            }
            let found = search.run();
            let maps: Vec<_> = found.iter().map(|e| e.to_labels(&a, &b)).collect();
            json!({"count": maps.len(), "embeddings": maps})
        }
        Command::Experiment { space, partition } => {
            let s = input::space(&space)?;
            let p: Partition = input::partition(&partition)?;
            to_value(&divisibility_experiment(&s, &p, parallel).map_err(domain)?)
        }
        Command::Fixture { kind } => match kind {
            Fixture::Chain { values, ell, n } => {
                to_value(&chain_space(&input::values(&values)?, &ell, n).map_err(domain)?)
            }
            Fixture::Mn { n } => to_value(&example_space_mn(n).map_err(domain)?),
            Fixture::SupPower { space, n } => {
                to_value(&sup_power(&input::space(&space)?, n).map_err(domain)?)
            }
            Fixture::Line { points } => to_value(&line_space(&points).map_err(domain)?),
        },
    };
    Ok(Output::Json(out))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let pretty = cli.pretty;
    let render = |v: &Value| {
        if pretty {
            serde_json::to_string_pretty(v)
        } else {
            serde_json::to_string(v)
        }
        .expect("serializable")
    };
    match pool.install(|| run(cli.command, cli.jobs)) {
        Ok(Output::Json(v)) => {
            println!("{}", render(&v));
            ExitCode::SUCCESS
        }
        Ok(Output::Text(t)) => {
            print!("{t}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            match &e {
                CliError::Usage(_) => eprintln!("{}", render(&e.to_json())),
                CliError::Domain { .. } => println!("{}", render(&e.to_json())),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
