//! Drives the command-line front end in-process and shows both output formats.

use szasz_durrmeyer::cli::run;

fn invoke(args: &[&str]) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("smd").chain(args.iter().copied()), &mut out, &mut err);
    println!("$ smd {}", args.join(" "));
    print!("{}{}", String::from_utf8_lossy(&out), String::from_utf8_lossy(&err));
    println!("(exit {code})\n");
}

fn main() {
    invoke(&["eval", "--n", "50", "--j", "1", "--f", "poly:0,1", "--x", "2"]);
    invoke(&["central-moments", "--n", "10", "--j", "1", "--s", "2", "--x", "2"]);
    invoke(&["voronovskaja", "--n", "10:2:6", "--j", "1", "--x", "1", "--q", "1", "--f", "exp(-x)", "--format", "csv"]);
    invoke(&["eval", "--n", "3", "--j", "0", "--f", "expA:2", "--x", "1"]);
}
