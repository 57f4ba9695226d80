use szasz_durrmeyer::cli::run;

fn smd(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("smd").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn eval_preserves_monomial() {
    let (code, out, _) = smd(&["eval", "--n", "50", "--j", "1", "--f", "poly:0,1", "--x", "2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["value"].as_f64(), Some(2.0));
    assert_eq!(v["truncation_error_bound"].as_f64(), Some(0.0));
}

#[test]
fn central_moment_split() {
    let (code, out, _) = smd(&["central-moments", "--n", "10", "--j", "1", "--s", "2", "--x", "2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert!((v["main"].as_f64().unwrap() - 0.4).abs() < 1e-15);
    assert_eq!(v["tail"].as_f64(), Some(0.0));
    assert!((v["total"].as_f64().unwrap() - 0.4).abs() < 1e-15);
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    assert!(out.find("main").unwrap() < out.find("tail").unwrap(), "{keys:?}");
}

#[test]
fn precondition_violation_exits_one() {
    let (code, out, err) = smd(&["eval", "--n", "3", "--j", "0", "--f", "expA:2", "--x", "1"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    let e = json(&err);
    assert_eq!(e["error"]["kind"], "precondition");
    assert!(e["error"]["message"].as_str().unwrap().contains("n > 2A"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["eval", "--n", "3", "--j", "0", "--f", "1", "--x", "1", "--bogus", "2"],
        vec!["eval", "--n", "3", "--j", "0", "--x", "1"],
        vec!["frobnicate"],
        vec!["converge", "--n", "10:2", "--j", "0", "--x", "1", "--f", "1"],
    ] {
        let (code, _, err) = smd(&args);
        assert_eq!(code, 2, "{args:?}");
        assert_eq!(json(&err)["error"]["kind"], "usage");
    }
}

#[test]
fn expression_errors_exit_one() {
    let (code, _, err) = smd(&["eval", "--n", "10", "--j", "0", "--f", "2 +", "--x", "1"]);
    assert_eq!(code, 1);
    assert_eq!(json(&err)["error"]["kind"], "syntax");
}

#[test]
fn negative_j_is_accepted() {
    let (code, out, _) = smd(&["moments", "--n", "10", "--j", "-2", "--r", "1", "--x", "1"]);
    assert_eq!(code, 0);
    assert!((json(&out)["value"].as_f64().unwrap() - 1.3).abs() < 1e-14);
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    rdr.records().map(|r| r.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn csv_and_json_encode_the_same_values() {
    let base = ["converge", "--n", "10:2:5", "--j", "1", "--x", "2", "--f", "sin(x)"];
    let (_, js, _) = smd(&base);
    let (_, cs, _) = smd(&[&base[..], &["--format", "csv"]].concat());
    let doc = json(&js);
    let rows = doc["rows"].as_array().unwrap();
    let table = csv_rows(&cs);
    assert_eq!(rows.len(), table.len());
    for (jr, cr) in rows.iter().zip(&table) {
        for (i, key) in ["n", "value", "reference", "error", "bound"].iter().enumerate() {
            let a = jr[*key].as_f64().unwrap();
            let b: f64 = cr[i].parse().unwrap();
            assert!((a - b).abs() <= 1e-11 * a.abs(), "{key}: {a} vs {b}");
        }
    }

    let base = ["expand", "--j", "2", "--x", "1.5", "--q", "3", "--f", "exp(-x)"];
    let (_, js, _) = smd(&base);
    let (_, cs, _) = smd(&[&base[..], &["--format", "csv"]].concat());
    for (jr, cr) in json(&js).as_array().unwrap().iter().zip(csv_rows(&cs)) {
        let (a, b) = (jr["value"].as_f64().unwrap(), cr[2].parse::<f64>().unwrap());
        assert!((a - b).abs() <= 1e-11 * a.abs());
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["eval", "--n", "37", "--j", "-1", "--f", "exp(-x)*sin(x)", "--x", "1.3"],
        vec!["voronovskaja", "--n", "10:2:6", "--j", "1", "--x", "1", "--q", "1", "--f", "exp(-x)"],
        vec!["localize", "--n", "20,40,60,80", "--j", "2", "--x", "1", "--delta", "0.3", "--f", "1"],
        vec!["deriv", "--n", "20", "--j", "0", "--m", "2", "--f", "cos(x)", "--x", "0.5", "--format", "csv"],
    ] {
        let first = smd(&args);
        assert_eq!(first.0, 0, "{args:?}: {}", first.2);
        for _ in 0..3 {
            assert_eq!(smd(&args), first);
        }
    }
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("smd-out-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = smd(&["moments", "--n", "10", "--j", "0", "--r", "2", "--x", "1", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v = json(&std::fs::read_to_string(&path).unwrap());
    assert!((v["value"].as_f64().unwrap() - 1.42).abs() < 1e-14);
    std::fs::remove_file(path).unwrap();
}
