"""Command-line entry points.

Subcommand groups: ``fsm`` (graph validation), ``clf`` (classifier
training and scoring), ``collector`` (scripted session simulation),
``eval`` (metrics), ``fixtures`` (synthetic corpora), ``serve`` and
``replay`` (the gateway). See README for the file formats.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from triagekit.adapters.scripted import ScriptedRule, ScriptedStubBackend
from triagekit.collector.pipeline import CollectorConfig, collect_step
from triagekit.collector.store import VectorStore
from triagekit.evalkit.classification import binary_metrics, mape
from triagekit.evalkit.fixtures import AnnotatedCorpus, FixtureSpec, generate_fixtures
from triagekit.evalkit.funnel import funnel_stats_from_file
from triagekit.evalkit.pairwise import ExpertLabelSet, aggregate_pairwise
from triagekit.fsm.clinical import ClinicalRuntime, clinical_actions, clinical_conditions
from triagekit.fsm.graph import GraphConfigError, load_graph
from triagekit.fsm.validate import validate_graph
from triagekit.gateway.bootstrap import build_service, load_config
from triagekit.gateway.wire import (
    OuterContext,
    UserRequest,
    serialize_response,
)
from triagekit.progress.linear import (
    KIND_QUESTION,
    KIND_READINESS,
    constant_relevance_model,
    detect_question,
    estimate_readiness,
    fit_linear,
    load_linear_model,
    save_linear_model,
)
from triagekit.safety.emergency import (
    emergency_score,
    load_emergency_model,
    save_emergency_model,
    train_emergency,
)
from triagekit.transcript import Transcript


def _read_transcript_file(path: str) -> tuple[Transcript, bool]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    transcript = Transcript.from_pairs([(r, t) for r, t in doc["transcript"]])
    return transcript, bool(doc.get("llm_flag", False))


def _cmd_fsm_validate(args: argparse.Namespace) -> int:
    runtime = ClinicalRuntime.inert()
    try:
        graph = load_graph(
            args.graph_file, clinical_conditions(runtime), clinical_actions(runtime)
        )
    except GraphConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    report = validate_graph(graph)
    print(report.summary())
    return 0 if report.ok else 1


def _cmd_train_emergency(args: argparse.Namespace) -> int:
    corpus = AnnotatedCorpus.load(args.corpus)
    records = corpus.emergency_records()
    if not records:
        print("corpus has no emergency-labeled records", file=sys.stderr)
        return 2
    critical_words: list[str] = []
    if args.critical_words:
        critical_words = [
            line.strip()
            for line in Path(args.critical_words).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
    model = train_emergency(
        chats=[r.transcript for r in records],
        labels=[int(r.emergency) for r in records],
        llm_flags=[bool(r.llm_flag) for r in records],
        critical_words=critical_words,
        rounds=args.rounds,
        n_components=args.n_components,
        threshold=args.threshold,
    )
    save_emergency_model(model, args.output)
    print(
        f"trained on {len(records)} chats: vocab {len(model.vocab.terms)}, "
        f"{model.n_components} components, {len(model.scorer.stumps)} stumps "
        f"-> {args.output}"
    )
    return 0


def _cmd_clf_score(args: argparse.Namespace) -> int:
    model = load_emergency_model(args.model)
    transcript, llm_flag = _read_transcript_file(args.chat_file)
    verdict = emergency_score(transcript, model, llm_flag)
    print(json.dumps({"score": verdict.score, "critical": verdict.critical}))
    return 0


def _cmd_train_linear(args: argparse.Namespace, kind: str) -> int:
    corpus = AnnotatedCorpus.load(args.corpus)
    if kind == KIND_QUESTION:
        records = corpus.question_records()
        rows = [(r.transcript.user_messages()[0], int(r.question)) for r in records]
    else:
        records = corpus.readiness_records()
        rows = [
            (r.transcript, int(r.ready), int(r.remaining_turns or 0)) for r in records
        ]
    if not records:
        print(f"corpus has no {kind}-labeled records", file=sys.stderr)
        return 2
    model = fit_linear(rows, kind)
    save_linear_model(model, args.output)
    print(f"trained {kind} model on {len(rows)} examples -> {args.output}")
    return 0


def _cmd_clf_predict(args: argparse.Namespace) -> int:
    model = load_linear_model(args.model)
    if model.kind == KIND_QUESTION:
        for line in Path(args.input).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            verdict = detect_question(line, model)
            print(
                json.dumps(
                    {
                        "text": line,
                        "is_question": verdict.is_question,
                        "score": verdict.score,
                    }
                )
            )
        return 0
    transcript, _ = _read_transcript_file(args.input)
    verdict = estimate_readiness(transcript, model)
    print(
        json.dumps(
            {
                "ready": verdict.ready,
                "score": verdict.score,
                "predicted_remaining_turns": verdict.predicted_remaining_turns,
            }
        )
    )
    return 0


def _cmd_collector_simulate(args: argparse.Namespace) -> int:
    doc = json.loads(Path(args.session_file).read_text(encoding="utf-8"))
    stub_doc = doc.get("stub", {})
    backend = ScriptedStubBackend(
        [
            ScriptedRule(reply=r["reply"], tag=r.get("tag"), contains=r.get("contains"))
            for r in stub_doc.get("rules", [])
        ],
        default_reply=stub_doc.get("default", ""),
    )
    cfg_doc = doc.get("config", {})
    cfg = CollectorConfig(
        reuse_threshold=cfg_doc.get("reuse_threshold", 0.965),
        dup_threshold=cfg_doc.get("dup_threshold", 0.86),
        n_candidates=cfg_doc.get("n_candidates", 5),
    )
    relevance = (
        load_linear_model(doc["relevance_model"])
        if doc.get("relevance_model")
        else constant_relevance_model(cfg.embedder)
    )
    store = VectorStore()
    history = Transcript()
    for message in doc["messages"]:
        history = history.append("user", message)
        question, provenance = collect_step(history, store, cfg, backend, relevance)
        print(f"user: {message}")
        print(f"system [{provenance}]: {question}")
        history = history.append("system", question)
    return 0


def _load_label_file(path: str) -> list[float]:
    return [
        float(line.strip())
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]


def _cmd_eval_pairwise(args: argparse.Namespace) -> int:
    corpus = AnnotatedCorpus.load(args.corpus)
    records = corpus.specialty_records()
    if not records:
        print("corpus has no specialty records", file=sys.stderr)
        return 2
    k = args.k
    system = [ExpertLabelSet(tuple(r.algorithm)) for r in records]
    expert_count = len(records[0].experts)
    experts = [
        [ExpertLabelSet(tuple(r.experts[i])) for r in records]
        for i in range(expert_count)
    ]
    summary = aggregate_pairwise(system, experts, k)
    if args.json:
        print(json.dumps(summary.to_dict(), indent=2))
    else:
        print(f"chats: {summary.n_chats}   experts: {summary.n_experts}   k: {k}")
        print(
            f"precision@{k}: {summary.precision_mean:.4f} "
            f"+/- {summary.precision_stderr:.4f}"
        )
        print(
            f"recall@{k}:    {summary.recall_mean:.4f} "
            f"+/- {summary.recall_stderr:.4f}"
        )
    return 0


def _cmd_eval_binary(args: argparse.Namespace) -> int:
    pred = [int(v) for v in _load_label_file(args.pred)]
    gold = [int(v) for v in _load_label_file(args.gold)]
    metrics = binary_metrics(pred, gold)
    if args.json:
        print(json.dumps(metrics.to_dict(), indent=2))
    else:
        print(
            f"precision: {metrics.precision:.4f}  recall: {metrics.recall:.4f}  "
            f"f1: {metrics.f1:.4f}  fpr: {metrics.fpr:.4f}"
        )
    return 0


def _cmd_eval_mape(args: argparse.Namespace) -> int:
    value = mape(_load_label_file(args.pred), _load_label_file(args.gold))
    print(json.dumps({"mape": value}) if args.json else f"mape: {value:.4f}")
    return 0


def _cmd_eval_funnel(args: argparse.Namespace) -> int:
    report = funnel_stats_from_file(args.audit_log)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(
            f"initiated: {report.initiated}  reached routing: {report.reached_routing} "
            f"({report.routing_rate:.2%})"
        )
        print(
            f"emergency: {report.emergency_flagged} ({report.emergency_rate:.2%})  "
            f"moderated: {report.moderated} ({report.moderation_rate:.2%})"
        )
        print(f"turns: {report.turns}  skipped lines: {report.skipped_lines}")
    return 0


def _cmd_fixtures_generate(args: argparse.Namespace) -> int:
    spec = FixtureSpec()
    if args.spec:
        spec = FixtureSpec(**json.loads(Path(args.spec).read_text(encoding="utf-8")))
    corpus = generate_fixtures(args.seed, spec)
    corpus.save(args.output)
    print(f"wrote {len(corpus)} records -> {args.output}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from triagekit.gateway.app import create_app

    config = load_config(args.config)
    service = build_service(config)
    app = create_app(service)
    uvicorn.run(
        app, host=config.get("host", "127.0.0.1"), port=int(config.get("port", 8080))
    )
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    doc = json.loads(Path(args.session_file).read_text(encoding="utf-8"))
    config = load_config(args.config)
    service = build_service(config)
    outer = doc["outer_context"]
    ctx = OuterContext(
        sex=outer["Sex"],
        age=outer["Age"],
        user_id=outer["UserId"],
        session_id=outer["SessionId"],
        client_id=outer["ClientId"],
    )
    for message in doc["messages"]:
        response = service.handle_request(UserRequest(text=message, outer_context=ctx))
        print(f">>> {message}")
        print(serialize_response(response).decode("utf-8"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="triagekit")
    sub = parser.add_subparsers(dest="command", required=True)

    fsm = sub.add_parser("fsm", help="graph tooling").add_subparsers(
        dest="fsm_command", required=True
    )
    validate = fsm.add_parser("validate", help="structural graph analysis")
    validate.add_argument("graph_file")
    validate.set_defaults(func=_cmd_fsm_validate)

    clf = sub.add_parser("clf", help="classifier training and scoring").add_subparsers(
        dest="clf_command", required=True
    )
    train_em = clf.add_parser("train-emergency")
    train_em.add_argument("corpus")
    train_em.add_argument("--rounds", type=int, default=100)
    train_em.add_argument("--n-components", type=int, default=None)
    train_em.add_argument("--threshold", type=float, default=0.11)
    train_em.add_argument("--critical-words", default=None)
    train_em.add_argument("-o", "--output", required=True)
    train_em.set_defaults(func=_cmd_train_emergency)

    score = clf.add_parser("score")
    score.add_argument("model")
    score.add_argument("chat_file")
    score.set_defaults(func=_cmd_clf_score)

    train_rd = clf.add_parser("train-readiness")
    train_rd.add_argument("corpus")
    train_rd.add_argument("-o", "--output", required=True)
    train_rd.set_defaults(func=lambda a: _cmd_train_linear(a, KIND_READINESS))

    train_q = clf.add_parser("train-question")
    train_q.add_argument("corpus")
    train_q.add_argument("-o", "--output", required=True)
    train_q.set_defaults(func=lambda a: _cmd_train_linear(a, KIND_QUESTION))

    predict = clf.add_parser("predict")
    predict.add_argument("model")
    predict.add_argument("input")
    predict.set_defaults(func=_cmd_clf_predict)

    collector = sub.add_parser("collector", help="collection pipeline").add_subparsers(
        dest="collector_command", required=True
    )
    simulate = collector.add_parser("simulate")
    simulate.add_argument("session_file")
    simulate.set_defaults(func=_cmd_collector_simulate)

    evaluate = sub.add_parser("eval", help="metrics").add_subparsers(
        dest="eval_command", required=True
    )
    pairwise = evaluate.add_parser("pairwise")
    pairwise.add_argument("corpus")
    pairwise.add_argument("--k", type=int, default=3)
    pairwise.add_argument("--json", action="store_true")
    pairwise.set_defaults(func=_cmd_eval_pairwise)

    binary = evaluate.add_parser("binary")
    binary.add_argument("pred")
    binary.add_argument("gold")
    binary.add_argument("--json", action="store_true")
    binary.set_defaults(func=_cmd_eval_binary)

    mape_cmd = evaluate.add_parser("mape")
    mape_cmd.add_argument("pred")
    mape_cmd.add_argument("gold")
    mape_cmd.add_argument("--json", action="store_true")
    mape_cmd.set_defaults(func=_cmd_eval_mape)

    funnel = evaluate.add_parser("funnel")
    funnel.add_argument("audit_log")
    funnel.add_argument("--json", action="store_true")
    funnel.set_defaults(func=_cmd_eval_funnel)

    fixtures = sub.add_parser("fixtures", help="synthetic corpora").add_subparsers(
        dest="fixtures_command", required=True
    )
    generate = fixtures.add_parser("generate")
    generate.add_argument("--seed", type=int, required=True)
    generate.add_argument("--spec", default=None)
    generate.add_argument("-o", "--output", required=True)
    generate.set_defaults(func=_cmd_fixtures_generate)

    serve = sub.add_parser("serve", help="run the HTTP gateway")
    serve.add_argument("--config", default=None)
    serve.set_defaults(func=_cmd_serve)

    replay = sub.add_parser("replay", help="drive a session file offline")
    replay.add_argument("session_file")
    replay.add_argument("--config", default=None)
    replay.set_defaults(func=_cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
