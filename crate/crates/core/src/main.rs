use std::io::Write;

fn main() {
    match interval_rank::cli::run(std::env::args_os()) {
        Ok((report, code)) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            let _ = writeln!(std::io::stdout(), "{text}");
            std::process::exit(code);
        }
        Err(e) => e.exit(),
    }
}
