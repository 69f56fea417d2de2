import os
import sys
import json
import time
import argparse
import warnings

from src.utils.config import config
from src.utils.exceptions import ClosureViolation, KauffmanError
from src.utils.logger import error_logger, reporting_logger as logger
from src.coefficients.params import build_env, check_admissible, ALPHA_CHOICES
from src.diagrams.basis import enumerate_kauffmann_basis
from src.diagrams.serialization import morphism_from_dict, morphism_to_dict
from src.diagrams.slice_word import parse_word
from src.rewrite.engine import compose, normalize, tensor
from src.bmw.cyclotomic import cyclotomic_basis, rank, structure_constants, structure_constants_table
from src.bmw.relations import all_ok, verify_bmw_relations, verify_kauffmann_relations
from src.qoracle.evaluator import check_bubble_centrality, evaluate, verify_category_relations
from src.qoracle.lie_type import LieType
from src.reporting.report_generator import ReportGenerator

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2


class CliUsageError(Exception):
    """命令行用法错误"""


class _Parser(argparse.ArgumentParser):
    """用法错误统一以退出码 1 结束"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: 错误: {message}\n")


def run_step(title, func, *args):
    """执行一个步骤：记录开始与耗时，出错时写错误日志后重新抛出"""
    logger.info(f"开始{title}")
    start_time = time.time()
    try:
        result = func(*args)
        logger.info(f"{title}完成，耗时: {time.time() - start_time:.2f} 秒")
        return result
    except Exception as e:
        error_logger.error(f"{title}过程中发生错误: {e}")
        raise


def emit(data):
    print(json.dumps(data, ensure_ascii=False))


def read_input(text):
    """'-' 表示标准输入，已存在的文件路径读取文件内容，其余按字面值"""
    if text == '-':
        return sys.stdin.read()
    if os.path.isfile(text):
        with open(text, 'r', encoding='utf-8') as f:
            return f.read()
    return text


def load_morphism(text, m, env):
    """把 JSON 态射或切片词文本读成约化后的态射"""
    content = read_input(text).strip()
    if content.startswith('{'):
        return morphism_from_dict(json.loads(content), env)
    return normalize(parse_word(content, m), env)


def make_env(args, default='affine'):
    return build_env(args.env or default, a=args.a, alpha=args.alpha, u=args.u)


def make_reporter(args, env=None):
    if not args.output:
        return None
    config.ensure_output_directory()
    return ReportGenerator(environment=json.dumps(env.describe(), ensure_ascii=False) if env else '')


# ---------------------------------------------------------------------- 各命令
def cmd_normalize(args):
    env = make_env(args)
    word = parse_word(read_input(args.word), args.m)
    trace = [] if args.trace else None
    result = run_step("约化切片词", lambda: normalize(word, env, strategy=args.strategy, seed=args.seed, trace=trace))
    for event in trace or ():
        emit(event)
    emit(morphism_to_dict(result))
    reporter = make_reporter(args, env)
    if reporter:
        reporter.save_morphism(result, 'normalize.json')
    return EXIT_OK


def cmd_compose(args):
    env = make_env(args)
    f = load_morphism(args.f, args.f_source, env)
    g = load_morphism(args.g, args.g_source, env)
    result = run_step("复合", compose, f, g, env)
    emit(morphism_to_dict(result))
    reporter = make_reporter(args, env)
    if reporter:
        reporter.save_morphism(result, 'compose.json')
    return EXIT_OK


def cmd_tensor(args):
    env = make_env(args)
    f = load_morphism(args.f, args.f_source, env)
    g = load_morphism(args.g, args.g_source, env)
    result = run_step("张量积", tensor, f, g, env)
    emit(morphism_to_dict(result))
    reporter = make_reporter(args, env)
    if reporter:
        reporter.save_morphism(result, 'tensor.json')
    return EXIT_OK


def cmd_basis(args):
    if args.category == 'kauffmann':
        env = None
        basis = enumerate_kauffmann_basis(args.m, args.s)
    elif args.category == 'cyclotomic':
        env = make_env(args, 'cyclotomic')
        basis = cyclotomic_basis(args.m, args.s, env)
    else:
        raise CliUsageError("仿射范畴的基是无限的，请使用 kauffmann 或 cyclotomic")
    manifest = [
        {'index': k, 'connector': d.connector.to_list(), 'dots': {str(i): e for i, e in d.dots}}
        for k, d in enumerate(basis)
    ]
    emit({'source': args.m, 'target': args.s, 'count': len(basis), 'basis': manifest})
    reporter = make_reporter(args, env)
    if reporter:
        reporter.save_json(manifest, f"basis_{args.m}_{args.s}.json")
    return EXIT_OK


def cmd_rank(args):
    try:
        value = rank(args.category, args.m, args.s, args.a or 1)
    except ValueError as e:
        raise CliUsageError(str(e)) from e
    if args.json:
        emit({'category': args.category, 'source': args.m, 'target': args.s, 'rank': value})
    else:
        print(value)
    return EXIT_OK


def cmd_bmw_verify(args):
    env = make_env(args, 'admissible')
    kauffmann = run_step("Kauffmann 关系校验", verify_kauffmann_relations, env)
    bmw = run_step("仿射 BMW 关系校验", verify_bmw_relations, args.r, env, args.s_max)
    emit({'kauffmann': kauffmann, 'bmw': bmw})
    reporter = make_reporter(args, env)
    if reporter:
        reporter.save_verification("Kauffmann 关系", kauffmann, 'kauffmann_relations.json')
        reporter.save_verification("仿射 BMW 关系", bmw, 'bmw_relations.json')
        reporter.generate_html_report([("Kauffmann 关系", kauffmann), ("仿射 BMW 关系", bmw)])
    return EXIT_OK if all_ok(kauffmann) and all_ok(bmw) else EXIT_FAILED


def cmd_cyclotomic_table(args):
    env = make_env(args, 'cyclotomic')
    basis, constants = run_step("计算结构常数", structure_constants, args.r, env)
    table = structure_constants_table(args.r, env, constants)
    if args.csv:
        sys.stdout.write(table.to_csv(index=False))
    else:
        emit({'basis_size': len(basis), 'entries': table.to_dict(orient='records')})
    reporter = make_reporter(args, env)
    if reporter:
        reporter.save_structure_constants(basis, table, f"structure_constants_r{args.r}")
    return EXIT_OK


def cmd_admissible(args):
    env = make_env(args, 'cyclotomic')
    rows = run_step("可容许性检查", check_admissible, env, args.max_index)
    emit(rows)
    reporter = make_reporter(args, env)
    if reporter:
        reporter.save_json(rows, 'admissible.json')
    return EXIT_OK if all(row['ok'] for row in rows) else EXIT_FAILED


def cmd_oracle_verify(args):
    t = LieType(args.type, args.n)
    rows = run_step(f"{t.label()} 矩阵关系校验", verify_category_relations, t, max(args.buffer, 1))
    bubbles = []
    if args.buffer > 0:
        for j in (1, 2, -1):
            bubbles.extend(check_bubble_centrality(t, j, args.buffer))
    emit({'relations': rows, 'bubble_centrality': bubbles})
    reporter = make_reporter(args)
    if reporter:
        reporter.save_verification(f"{t.label()} 矩阵关系", rows + bubbles, f"oracle_{t.label()}.json")
        reporter.generate_html_report([(f"{t.label()} 矩阵关系", rows), ("泡泡中心性", bubbles)],
                                      f"oracle_{t.label()}.html")
    return EXIT_OK if all_ok(rows) and all_ok(bubbles) else EXIT_FAILED


def cmd_oracle_eval(args):
    t = LieType(args.type, args.n)
    env = make_env(args)
    content = read_input(args.word).strip()
    if content.startswith('{'):
        target = morphism_from_dict(json.loads(content), env)
    else:
        target = parse_word(content, args.m)
    matrix = run_step("矩阵求值", evaluate, target, t, args.buffer)
    emit({'rows': len(matrix.rows), 'cols': len(matrix.cols), 'entries': matrix.to_triplets()})
    reporter = make_reporter(args)
    if reporter:
        reporter.save_matrix(matrix, f"oracle_eval_{t.label()}.json")
    return EXIT_OK


COMMANDS = {
    'normalize': cmd_normalize,
    'compose': cmd_compose,
    'tensor': cmd_tensor,
    'basis': cmd_basis,
    'rank': cmd_rank,
    'bmw-verify': cmd_bmw_verify,
    'cyclotomic-table': cmd_cyclotomic_table,
    'admissible': cmd_admissible,
    'oracle-verify': cmd_oracle_verify,
    'oracle-eval': cmd_oracle_eval,
}


def parse_args(argv=None):
    """解析命令行参数"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--env', choices=['affine', 'admissible', 'cyclotomic'], help='参数环境')
    common.add_argument('--a', '-a', type=int, help='分圆次数')
    common.add_argument('--u', help='逗号分隔的 u 值，缺省为符号')
    common.add_argument('--alpha', choices=ALPHA_CHOICES, help='δ 的符号选择')
    common.add_argument('--type', choices=['B', 'C', 'D'], default=config.ORACLE_DEFAULT_TYPE, help='李型')
    common.add_argument('--n', type=int, default=config.ORACLE_DEFAULT_RANK, help='李型的秩')
    common.add_argument('--buffer', type=int, default=config.ORACLE_BUFFER, help='矩阵求值的缓冲因子数')
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument('--json', action='store_true', help='rank 也以 JSON 输出（其余命令默认 JSON）')
    fmt.add_argument('--csv', action='store_true', help='结构常数表以 CSV 输出')
    common.add_argument('--trace', action='store_true', help='逐行输出约化规则记录')
    common.add_argument('--output', '-o', action='store_true', help=f'同时把报告写到 {config.OUTPUT_DIR}')

    parser = _Parser(description='Kauffmann 范畴精确计算工具')
    sub = parser.add_subparsers(dest='command', parser_class=_Parser)
    sub.required = True

    p = sub.add_parser('normalize', parents=[common], help='约化切片词')
    p.add_argument('word', help="切片词文本、文件路径或 '-'")
    p.add_argument('-m', type=int, default=0, help='源元数')
    p.add_argument('--strategy', choices=['leftmost', 'random'], default=None)
    p.add_argument('--seed', type=int, default=None)

    for name, text in (('compose', '复合 f∘g'), ('tensor', '张量积 f⊗g')):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument('f', help='JSON 态射或切片词')
        p.add_argument('g', help='JSON 态射或切片词')
        p.add_argument('--f-source', type=int, default=0, help='f 为切片词时的源元数')
        p.add_argument('--g-source', type=int, default=0, help='g 为切片词时的源元数')

    for name, text in (('basis', '枚举基'), ('rank', '计算秩')):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument('--category', choices=['kauffmann', 'affine', 'cyclotomic'], default='kauffmann')
        p.add_argument('-m', type=int, required=True)
        p.add_argument('-s', type=int, required=True)

    p = sub.add_parser('bmw-verify', parents=[common], help='检查仿射 BMW 关系')
    p.add_argument('-r', type=int, default=3, help='线数')
    p.add_argument('--s-max', type=int, default=None)

    p = sub.add_parser('cyclotomic-table', parents=[common], help='分圆商的结构常数')
    p.add_argument('-r', type=int, default=1, help='线数')

    p = sub.add_parser('admissible', parents=[common], help='ω 的可容许性检查')
    p.add_argument('--max-index', type=int, default=10)

    sub.add_parser('oracle-verify', parents=[common], help='矩阵层面的关系校验')

    p = sub.add_parser('oracle-eval', parents=[common], help='把切片词求值为矩阵')
    p.add_argument('word', help="切片词文本、JSON 态射、文件路径或 '-'")
    p.add_argument('-m', type=int, default=0, help='源元数')

    return parser.parse_args(argv)


def main(argv=None):
    """主函数

    Returns:
        int: 退出码；0 成功，1 用法或输入错误，2 校验失败
    """
    args = parse_args(argv)
    logger.info(f"===== 执行命令: {args.command} =====")
    start_time = time.time()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter('always')
            code = COMMANDS[args.command](args)
    except KeyboardInterrupt:
        error_logger.warning("程序被用户中断")
        return EXIT_USAGE
    except ClosureViolation as e:
        error_logger.error(f"校验失败: {e}")
        print(f"校验失败: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (CliUsageError, KauffmanError, ValueError) as e:
        error_logger.error(f"输入错误: {e}")
        print(f"错误: {e}", file=sys.stderr)
        return EXIT_USAGE
    logger.info(f"总执行时间: {time.time() - start_time:.2f} 秒")
    return code


if __name__ == "__main__":
    sys.exit(main())
