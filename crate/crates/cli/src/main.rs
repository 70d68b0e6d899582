use clap::Parser;

use anglelab_cli::{run, RunConfig, EXIT_INVALID};

fn main() {
    if let Some(n) = std::env::var("ANGLELAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("anglelab: ANGLELAB_THREADS: {e}");
            std::process::exit(EXIT_INVALID);
        }
    }
    let config = RunConfig::parse();
    std::process::exit(run(&config));
}
