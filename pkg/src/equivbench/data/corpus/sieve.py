def sieve(n):
    is_prime = []
    for i in range(n + 1):
        is_prime.append(True)
    primes = []
    p = 2
    while p <= n:
        if is_prime[p]:
            primes.append(p)
            multiple = p * p
            while multiple <= n:
                is_prime[multiple] = False
                multiple = multiple + p
        p = p + 1
    return primes
