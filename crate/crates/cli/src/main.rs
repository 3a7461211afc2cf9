use std::io::Read;
use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use rendermatch_cli::{build_router, exit_code, AppState, Engine, EngineConfig};
use rendermatch_core::{Error, NumericSpan, Result};

/// Ontology-backed matchmaking for render-farm services.
#[derive(Parser)]
#[command(name = "rendermatch", version, about)]
struct Cli {
    /// Concept graph file.
    #[arg(long, env = "RENDERMATCH_ONTOLOGY", global = true)]
    ontology: Option<PathBuf>,

    /// Profile store file. Omit to work in memory.
    #[arg(long, env = "RENDERMATCH_REGISTRY", global = true)]
    registry: Option<PathBuf>,

    /// Weight of the requirement side in concept similarity.
    #[arg(long, default_value_t = 0.5, global = true)]
    rho: f64,

    /// Scores at or below this value count as failed.
    #[arg(long, default_value_t = 0.5, global = true)]
    threshold: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score two graph terms against each other.
    Sim(SimArgs),
    /// Rank registered services against a requirements document.
    Query(QueryArgs),
    /// Add profile documents to the registry.
    Register(RegisterArgs),
    /// Print the registry as canonical profile documents.
    List,
    /// Score ranking quality against gold judgments.
    Eval(EvalArgs),
    /// Serve the engine over HTTP.
    Serve(ServeArgs),
}

#[derive(Args)]
struct SimArgs {
    /// Concept, alias, or pinned reference like maya@7.
    x: String,
    y: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct QueryArgs {
    /// Requirements document; `-` reads stdin.
    file: PathBuf,
    /// Keep only the first K results.
    #[arg(long)]
    top_k: Option<usize>,
    /// Drop services with any failed attribute.
    #[arg(long)]
    strict: bool,
    /// Override an entry weight, KEY=WEIGHT. Repeatable.
    #[arg(long = "weight", value_name = "KEY=WEIGHT")]
    weights: Vec<String>,
    /// Override a numeric span, KEY=MIN:MAX. Repeatable.
    #[arg(long = "span", value_name = "KEY=MIN:MAX")]
    spans: Vec<String>,
    /// Print per-attribute scores as well.
    #[arg(long)]
    verbose: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RegisterArgs {
    /// Profile document(s); `-` reads stdin.
    file: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Requirements documents, one per query.
    #[arg(long)]
    queries: PathBuf,
    /// Gold judgments, `relevant <query> <service>` lines.
    #[arg(long)]
    gold: PathBuf,
    /// Retrieved-set size for top-k scoring.
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ServeArgs {
    /// Bind address; port 0 picks a free port.
    #[arg(long, default_value = "127.0.0.1:8900")]
    addr: SocketAddr,
}

fn read_input(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn parse_weight(arg: &str) -> Result<(String, f64)> {
    let (key, raw) = arg
        .split_once('=')
        .ok_or_else(|| Error::Invalid(format!("weight `{arg}` is not KEY=WEIGHT")))?;
    let weight: f64 = raw
        .parse()
        .map_err(|_| Error::Invalid(format!("weight `{raw}` is not a number")))?;
    Ok((key.to_string(), weight))
}

fn parse_span(arg: &str) -> Result<(String, NumericSpan)> {
    let (key, range) = arg
        .split_once('=')
        .ok_or_else(|| Error::Invalid(format!("span `{arg}` is not KEY=MIN:MAX")))?;
    let (lo, hi) = range
        .split_once(':')
        .ok_or_else(|| Error::Invalid(format!("span `{range}` is not MIN:MAX")))?;
    let min: f64 = lo
        .parse()
        .map_err(|_| Error::Invalid(format!("span bound `{lo}` is not a number")))?;
    let max: f64 = hi
        .parse()
        .map_err(|_| Error::Invalid(format!("span bound `{hi}` is not a number")))?;
    Ok((key.to_string(), NumericSpan::new(min, max)?))
}

fn engine_config(cli: &Cli) -> Result<EngineConfig> {
    let ontology_path = cli
        .ontology
        .clone()
        .ok_or_else(|| Error::Invalid("no ontology given; pass --ontology or set RENDERMATCH_ONTOLOGY".into()))?;
    Ok(EngineConfig {
        ontology_path,
        registry_path: cli.registry.clone(),
        rho: cli.rho,
        threshold: cli.threshold,
    })
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Sim(args) => {
            let engine = Engine::load(&engine_config(&cli)?)?;
            let report = engine.sim_terms(&args.x, &args.y)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("json encoding"));
            } else {
                println!(
                    "{} {} {} = {:.4}",
                    report.kind, report.left, report.right, report.value
                );
            }
            Ok(())
        }
        Command::Query(args) => {
            let engine = Engine::load(&engine_config(&cli)?)?;
            let text = read_input(&args.file)?;
            let weights = args
                .weights
                .iter()
                .map(|s| parse_weight(s))
                .collect::<Result<Vec<_>>>()?;
            let spans = args
                .spans
                .iter()
                .map(|s| parse_span(s))
                .collect::<Result<Vec<_>>>()?;
            let results = engine.rank_text(&text, args.top_k, args.strict, &weights, &spans)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&results).expect("json encoding"));
            } else {
                for result in &results {
                    println!("{:>3}  {:<24} {:.4}", result.rank, result.service_id, result.aggregate);
                    if args.verbose {
                        for (key, score) in &result.per_attribute {
                            println!("     {:<22} {:.4}", key, score.value());
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Register(args) => {
            let mut engine = Engine::load(&engine_config(&cli)?)?;
            if cli.registry.is_none() {
                eprintln!("note: no --registry path, changes will not outlive this process");
            }
            let text = read_input(&args.file)?;
            for outcome in engine.register_text(&text)? {
                let verb = if outcome.created { "registered" } else { "updated" };
                println!("{} {} (revision {})", verb, outcome.service_id, outcome.revision);
            }
            Ok(())
        }
        Command::List => {
            let engine = Engine::load(&engine_config(&cli)?)?;
            print!("{}", engine.listing());
            Ok(())
        }
        Command::Eval(args) => {
            let engine = Engine::load(&engine_config(&cli)?)?;
            let queries = read_input(&args.queries)?;
            let gold = read_input(&args.gold)?;
            let report = engine.eval_texts(&queries, &gold, args.k)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("json encoding"));
            } else {
                print!("{}", report.comparison_table());
            }
            Ok(())
        }
        Command::Serve(args) => serve(engine_config(&cli)?, args.addr),
    }
}

fn serve(config: EngineConfig, addr: SocketAddr) -> Result<()> {
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        // Port 0 resolves here; tests scrape the line to find the server.
        println!("listening on http://{}", listener.local_addr()?);

        // Bind first, load second: health checks answer immediately and
        // data endpoints return 503 until the engine slots in.
        let state = AppState::empty();
        let loader_state = state.clone();
        tokio::spawn(async move {
            match tokio::task::spawn_blocking(move || Engine::load(&config)).await {
                Ok(Ok(engine)) => loader_state.install(engine).await,
                Ok(Err(error)) => {
                    eprintln!("error: {error}");
                    std::process::exit(exit_code(&error));
                }
                Err(join_error) => {
                    eprintln!("error: engine loader crashed: {join_error}");
                    std::process::exit(1);
                }
            }
        });

        axum::serve(listener, build_router(state)).await?;
        Ok(())
    })
}

fn main() {
    let cli = Cli::parse();
    if let Err(error) = run(cli) {
        eprintln!("error: {error}");
        std::process::exit(exit_code(&error));
    }
}
